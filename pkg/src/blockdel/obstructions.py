"""Obstruction search and cluster extraction.

An *obstruction* here is an induced biconnected subgraph that certifies the
graph is not clusterable: either it has between 2 and d vertices and falls
outside the target class, or it has between d+1 and 2d-2 vertices.  The
search (``find_obstruction``) repeatedly grows a candidate set X from a
shortest cycle; when no obstruction exists it proves the graph decomposes
into clusters that pairwise share at most one vertex, and ``clusters``
extracts exactly those.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations

from .graphs import (
    Graph,
    PClassSpec,
    bfs_distances,
    block_in_class,
    lex_shortest_path,
)

KIND_NOT_IN_CLASS = "not-in-class"
KIND_TOO_BIG = "too-big"


@dataclass(frozen=True)
class Obstruction:
    """An induced biconnected witness that the graph is not clusterable.

    kind "not-in-class": 2 <= |V| <= d and the induced subgraph is outside
    the class; kind "too-big": d+1 <= |V| <= 2d-2.
    """

    vertex_set: frozenset[int]
    kind: str


@dataclass(frozen=True)
class ClusterSet:
    """Maximal cluster pieces (K1, K2, or in-class with <= d vertices).

    ``external_vertices`` are the vertices shared by two or more clusters.
    """

    clusters: tuple[frozenset[int], ...]
    external_vertices: frozenset[int]

    def clusters_containing(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.clusters) if v in c)


class NotClusterableError(ValueError):
    """Cluster extraction was invoked on a graph that still has an obstruction."""

    def __init__(self, obstruction: Obstruction):
        super().__init__(
            f"graph is not clusterable: {obstruction.kind} obstruction on "
            f"{sorted(obstruction.vertex_set)}"
        )
        self.obstruction = obstruction


# -- shortest cycles and X-paths ----------------------------------------


def _shortest_cycle(g: Graph, max_len: int) -> list[int] | None:
    """A shortest cycle of length <= max_len, or None.

    Deterministic: among shortest cycles, picks the one through the
    lexicographically smallest edge, extracted as a lex-smallest path.
    """
    if max_len < 3:
        return None
    best: tuple[int, int, int] | None = None  # (length, u, v)
    for u, v in g.edges():
        # shortest cycle through edge u-v = that edge + shortest other u-v path
        def adj(a: int, _u: int = u, _v: int = v):
            for b in g.neighbors(a):
                if (a, b) != (_u, _v) and (a, b) != (_v, _u):
                    yield b

        dist = bfs_distances(adj, u)
        if v not in dist:
            continue
        length = dist[v] + 1
        if best is None or (length, u, v) < best:
            best = (length, u, v)
    if best is None or best[0] > max_len:
        return None
    _, u, v = best

    def adj2(a: int):
        for b in g.neighbors(a):
            if (a, b) != (u, v) and (a, b) != (v, u):
                yield b

    path = lex_shortest_path(adj2, u, v)
    assert path is not None
    return path


def _best_x_path(
    g: Graph, x_set: set[int], cap_internal: int
) -> list[int] | None:
    """Shortest non-trivial X-path in ``g`` with at most ``cap_internal``
    internal vertices (all internal vertices outside X), or None.

    Ties broken by smallest endpoint pair, then lex-smallest path.
    """
    if cap_internal < 1:
        return None
    xs = sorted(x_set)
    best: tuple[int, int, int] | None = None  # (internal, x, y)
    for x, y in combinations(xs, 2):

        def adj(a: int, _x: int = x, _y: int = y):
            for b in g.neighbors(a):
                if b in x_set and b not in (_x, _y):
                    continue
                if (a, b) in ((_x, _y), (_y, _x)):  # forbid the trivial edge path
                    continue
                yield b

        dist = bfs_distances(adj, y)
        if x not in dist:
            continue
        internal = dist[x] - 1
        if internal > cap_internal:
            continue
        if best is None or (internal, x, y) < best:
            best = (internal, x, y)
    if best is None:
        return None
    _, x, y = best

    def adj3(a: int):
        for b in g.neighbors(a):
            if b in x_set and b not in (x, y):
                continue
            if (a, b) in ((x, y), (y, x)):
                continue
            yield b

    return lex_shortest_path(adj3, x, y)


def _drop_internal_edges(g: Graph, x_set: set[int]) -> Graph:
    inner = [(u, v) for u, v in g.edges() if u in x_set and v in x_set]
    return g.delete_edges(inner) if inner else g


# -- obstruction search --------------------------------------------------


def find_obstruction(g: Graph, p: PClassSpec, d: int) -> Obstruction | None:
    """Search for an obstruction; ``None`` means the graph is clusterable.

    Rounds carve out one grown candidate X at a time: start from a shortest
    cycle in the working graph (original graph minus edges of previously
    carved pieces), grow X by short X-paths while it stays in the class, and
    on failure to grow further try the two escape checks that manufacture an
    oversized witness.  Class membership is always evaluated on the subgraph
    induced in the *original* graph, so chords excluded from the working
    graph still count.
    """
    if p.degenerate:
        raise ValueError("degenerate class: no graph with an edge qualifies; "
                         "route to a vertex-cover solver instead")
    if d < 2:
        raise ValueError("d must be at least 2")
    if d == 2:
        return None  # every cycle bound below is vacuous
    work = g
    while True:
        cycle = _shortest_cycle(work, 2 * d - 2)
        if cycle is None:
            return None
        x_set = set(cycle)
        if len(x_set) >= d + 1:
            return Obstruction(frozenset(x_set), KIND_TOO_BIG)
        if not block_in_class(g, x_set, p):
            return Obstruction(frozenset(x_set), KIND_NOT_IN_CLASS)
        while True:
            grow = _best_x_path(work, x_set, d - len(x_set))
            if grow is None:
                break
            x_set.update(grow)
            if not block_in_class(g, x_set, p):
                return Obstruction(frozenset(x_set), KIND_NOT_IN_CLASS)
        escape = _best_x_path(work, x_set, 2 * d - 2 - len(x_set))
        if escape is not None:
            full = frozenset(x_set | set(escape))
            # growth exhaustion forces any remaining short X-path to overshoot d
            assert d + 1 <= len(full) <= 2 * d - 2
            return Obstruction(full, KIND_TOO_BIG)
        pair = _pair_escape(g, work, x_set, d)
        if pair is not None:
            return Obstruction(frozenset(pair), KIND_TOO_BIG)
        work = _drop_internal_edges(work, x_set)


def _pair_escape(
    g: Graph, work: Graph, x_set: set[int], d: int
) -> set[int] | None:
    """Second escape: two vertices of X joined by a path inside the carved
    piece and another through the rest, short enough in total."""
    induced = g.induced(x_set)

    def outer_adj(a: int):
        for b in work.neighbors(a):
            if a in x_set and b in x_set:
                continue
            yield b

    best: tuple[int, int, int] | None = None
    for u, v in combinations(sorted(x_set), 2):
        inner_dist = bfs_distances(lambda a: induced.neighbors(a), u)
        outer_dist = bfs_distances(outer_adj, u)
        if v not in outer_dist:
            continue
        total = inner_dist[v] + outer_dist[v]
        if total > 2 * d - 2:
            continue
        if best is None or (total, u, v) < best:
            best = (total, u, v)
    if best is None:
        return None
    _, u, v = best
    inner_path = lex_shortest_path(lambda a: induced.neighbors(a), u, v)
    outer_path = lex_shortest_path(outer_adj, u, v)
    assert inner_path is not None and outer_path is not None
    # after the first escape failed, a short outer path cannot re-enter X
    assert all(w not in x_set for w in outer_path[1:-1])
    full = set(inner_path) | set(outer_path)
    assert d + 1 <= len(full) <= 2 * d - 2
    return full


# -- cluster extraction --------------------------------------------------


def clusters(g: Graph, p: PClassSpec, d: int) -> ClusterSet:
    """Extract the cluster decomposition of an obstruction-free graph.

    Raises :class:`NotClusterableError` (carrying the witness) if the graph
    still has an obstruction.  Single vertices appear as K1 clusters only
    when isolated; leftover acyclic edges become K2 clusters.
    """
    witness = find_obstruction(g, p, d)
    if witness is not None:
        raise NotClusterableError(witness)
    found: list[frozenset[int]] = []
    work = g
    while True:
        cycle = _shortest_cycle(work, d)
        if cycle is None:
            break
        x_set = set(cycle)
        while True:
            grow = _best_x_path(work, x_set, d - len(x_set))
            if grow is None:
                break
            x_set.update(grow)
        # freeness guarantees each carved piece is a small in-class block
        assert len(x_set) <= d and block_in_class(g, x_set, p)
        found.append(frozenset(x_set))
        work = _drop_internal_edges(work, x_set)
    found.extend(frozenset(e) for e in work.edges())
    found.extend(frozenset((v,)) for v in g.vertices if g.degree(v) == 0)
    found.sort(key=lambda c: tuple(sorted(c)))
    multiplicity = Counter(v for c in found for v in c)
    external = frozenset(v for v, times in multiplicity.items() if times >= 2)
    return ClusterSet(tuple(found), external)


def check_clusterable(g: Graph, cs: ClusterSet) -> bool:
    """True iff every pairwise cluster intersection has at most one vertex
    (and all clusters live inside ``g``)."""
    vs = set(g.vertices)
    if any(not c <= vs for c in cs.clusters):
        return False
    return all(len(a & b) <= 1 for a, b in combinations(cs.clusters, 2))


def assert_valid_obstruction(
    g: Graph, p: PClassSpec, d: int, ob: Obstruction
) -> None:
    """Structural contract of a returned obstruction (test surface)."""
    sub = g.induced(ob.vertex_set)
    assert sub.is_biconnected(), "obstruction must induce a biconnected subgraph"
    if ob.kind == KIND_NOT_IN_CLASS:
        assert 2 <= len(ob.vertex_set) <= d
        assert not block_in_class(g, ob.vertex_set, p)
    elif ob.kind == KIND_TOO_BIG:
        assert d + 1 <= len(ob.vertex_set) <= 2 * d - 2
    else:  # pragma: no cover - defensive
        raise AssertionError(f"unknown obstruction kind {ob.kind!r}")
