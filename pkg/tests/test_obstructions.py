"""Obstruction search and cluster extraction against enumeration oracles."""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockdel.graphs import (
    ALL_BICONNECTED,
    CLIQUES,
    CYCLES_AND_K2,
    Graph,
    PClassSpec,
    block_in_class,
)
from blockdel.obstructions import (
    KIND_NOT_IN_CLASS,
    KIND_TOO_BIG,
    NotClusterableError,
    assert_valid_obstruction,
    check_clusterable,
    clusters,
    find_obstruction,
)
from util import (
    bowtie,
    complete_graph,
    cycle_graph,
    diamond,
    path_graph,
    random_edge_graph,
    triangle_chain,
)

CLASSES = [ALL_BICONNECTED, CLIQUES, CYCLES_AND_K2]


def obstruction_exists(g: Graph, p: PClassSpec, d: int) -> bool:
    """Enumeration oracle: any induced biconnected subgraph that is either
    out-of-class at size <= d, or simply of size d+1 .. 2d-2."""
    for size in range(3, min(g.n, 2 * d - 2) + 1):
        for vs in combinations(g.vertices, size):
            if not g.induced(vs).is_biconnected():
                continue
            if size >= d + 1 or not block_in_class(g, vs, p):
                return True
    return False


def maximal_cluster_pieces(g: Graph, p: PClassSpec, d: int) -> set[frozenset[int]]:
    """Enumeration oracle for the cluster decomposition: inclusion-maximal
    vertex sets inducing K1 or an in-class biconnected subgraph of <= d
    vertices."""
    members = [frozenset((v,)) for v in g.vertices]
    for size in range(2, min(g.n, d) + 1):
        for vs in combinations(g.vertices, size):
            if g.induced(vs).is_biconnected() and block_in_class(g, vs, p):
                members.append(frozenset(vs))
    return {m for m in members if not any(m < t for t in members)}


# -- fixed examples ------------------------------------------------------


def test_c5_is_free_for_cycles():
    assert find_obstruction(cycle_graph(5), CYCLES_AND_K2, 5) is None


def test_diamond_is_a_small_out_of_class_witness():
    ob = find_obstruction(diamond(), CYCLES_AND_K2, 4)
    assert ob is not None and ob.kind == KIND_NOT_IN_CLASS
    assert ob.vertex_set == frozenset(range(4))
    assert_valid_obstruction(diamond(), CYCLES_AND_K2, 4, ob)


def test_c4_is_an_oversize_witness_for_cliques_d3():
    ob = find_obstruction(cycle_graph(4), CLIQUES, 3)
    assert ob is not None and ob.kind == KIND_TOO_BIG
    assert ob.vertex_set == frozenset(range(4))
    assert_valid_obstruction(cycle_graph(4), CLIQUES, 3, ob)


def test_d2_short_circuits_to_free():
    assert find_obstruction(complete_graph(5), CLIQUES, 2) is None


def test_degenerate_class_is_rejected():
    empty = PClassSpec("custom", "none", degenerate=True)
    with pytest.raises(ValueError):
        find_obstruction(path_graph(3), empty, 4)
    with pytest.raises(ValueError):
        find_obstruction(path_graph(3), CLIQUES, 1)


def test_bowtie_clusters_for_cliques():
    cs = clusters(bowtie(), CLIQUES, 3)
    assert set(cs.clusters) == {frozenset({0, 1, 2}), frozenset({0, 3, 4})}
    assert cs.external_vertices == frozenset({0})
    assert check_clusterable(bowtie(), cs)


def test_path_clusters_are_k2s():
    cs = clusters(path_graph(3), CLIQUES, 3)
    assert set(cs.clusters) == {frozenset({0, 1}), frozenset({1, 2})}
    assert cs.external_vertices == frozenset({1})


def test_c5_is_a_single_cluster():
    cs = clusters(cycle_graph(5), CYCLES_AND_K2, 5)
    assert cs.clusters == (frozenset(range(5)),)
    assert cs.external_vertices == frozenset()


def test_isolated_vertices_become_k1_clusters():
    g = Graph.from_edges(range(4), [(0, 1)])
    cs = clusters(g, CLIQUES, 3)
    assert set(cs.clusters) == {frozenset({0, 1}), frozenset({2}), frozenset({3})}


def test_cluster_extraction_rejects_unclusterable_input():
    with pytest.raises(NotClusterableError) as exc:
        clusters(diamond(), CYCLES_AND_K2, 4)
    assert_valid_obstruction(diamond(), CYCLES_AND_K2, 4, exc.value.obstruction)


def test_check_clusterable_flags_a_two_vertex_overlap():
    g = diamond()
    from blockdel.obstructions import ClusterSet

    fake = ClusterSet((frozenset({0, 1, 2}), frozenset({0, 1, 3})), frozenset({0, 1}))
    assert not check_clusterable(g, fake)
    assert check_clusterable(Graph.from_edges(), ClusterSet((), frozenset()))


# -- oracle agreement ----------------------------------------------------


@pytest.mark.parametrize("seed", range(120))
def test_freeness_decision_matches_enumeration(seed):
    rng = random.Random(seed)
    g = random_edge_graph(rng.randint(0, 9), rng.choice([0.15, 0.3, 0.5]), rng)
    p = rng.choice(CLASSES)
    d = rng.choice([3, 4, 5])
    ob = find_obstruction(g, p, d)
    assert (ob is None) == (not obstruction_exists(g, p, d))
    if ob is not None:
        assert_valid_obstruction(g, p, d, ob)


@pytest.mark.parametrize("seed", range(200))
def test_clusters_match_maximal_piece_enumeration(seed):
    rng = random.Random(10_000 + seed)
    g = random_edge_graph(rng.randint(0, 9), rng.choice([0.1, 0.2, 0.35]), rng)
    p = rng.choice(CLASSES)
    d = rng.choice([3, 4, 5])
    if find_obstruction(g, p, d) is not None:
        return
    cs = clusters(g, p, d)
    assert set(cs.clusters) == maximal_cluster_pieces(g, p, d)
    assert check_clusterable(g, cs)
    # every edge lies in exactly one cluster
    for u, v in g.edges():
        assert sum(1 for c in cs.clusters if u in c and v in c) == 1
    # external vertices are exactly the multiply-covered ones
    for v in g.vertices:
        assert (v in cs.external_vertices) == (len(cs.clusters_containing(v)) >= 2)


@pytest.mark.parametrize(
    "g, p, d",
    [
        (triangle_chain(4), CLIQUES, 3),
        (triangle_chain(4), CYCLES_AND_K2, 3),
        (cycle_graph(8), CYCLES_AND_K2, 8),
        (complete_graph(4), CLIQUES, 4),
        (path_graph(7), ALL_BICONNECTED, 4),
    ],
)
def test_structured_free_graphs_cluster_correctly(g, p, d):
    cs = clusters(g, p, d)
    assert set(cs.clusters) == maximal_cluster_pieces(g, p, d)
    for c in cs.clusters:
        assert len(c) == 1 or (len(c) <= d and block_in_class(g, c, p))


def test_obstruction_search_is_deterministic():
    rng = random.Random(7)
    for _ in range(20):
        g = random_edge_graph(8, 0.4, rng)
        assert find_obstruction(g, CYCLES_AND_K2, 3) == find_obstruction(
            g, CYCLES_AND_K2, 3
        )


# -- hypothesis sweep ----------------------------------------------------


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=0, max_value=8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(range(n), edges)


@given(small_graphs(), st.sampled_from(CLASSES), st.integers(3, 5))
@settings(max_examples=120, deadline=None)
def test_every_outcome_is_internally_consistent(g, p, d):
    ob = find_obstruction(g, p, d)
    if ob is None:
        cs = clusters(g, p, d)
        assert check_clusterable(g, cs)
        covered = set()
        for c in cs.clusters:
            covered |= c
        assert covered == set(g.vertices)
    else:
        assert_valid_obstruction(g, p, d, ob)
