"""Reduction of clusterable instances to subset feedback vertex set.

Once a graph is known to decompose into clusters, deleting down to the target
class is equivalent to hitting every cycle that is *not* inside a single
cluster.  That in turn reduces to subset feedback vertex set: split every
external vertex into one copy per cluster, keep the original vertex as the
terminal joining its copies, and ask for a set meeting every cycle through a
terminal.  This module builds that instance, solves it exactly at desk scale,
and lifts solutions back to original-graph vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import Graph, bfs_distances, lex_shortest_path
from .obstructions import ClusterSet

# beyond this girth, branching on one cycle is worse than plain subset search
_LONG_CYCLE = 16


@dataclass(frozen=True, eq=False)
class SfvsInstance:
    """A subset-FVS instance: forbid cycles through any terminal.

    ``back_map`` sends each split vertex to its (external vertex, cluster
    index) origin; it is empty for hand-built instances.
    """

    graph: Graph
    terminals: frozenset[int]
    k: int
    back_map: dict[int, tuple[int, int]]


def build_sfvs_instance(g: Graph, cs: ClusterSet, k: int) -> SfvsInstance:
    """Split external vertices per cluster, exactly one terminal edge each.

    Every original edge lies in exactly one cluster; an endpoint that is
    external is rewired to its split copy for that cluster, so a cycle
    through a terminal in the result must cross between two clusters of the
    original graph.
    """
    external = cs.external_vertices
    split_of: dict[tuple[int, int], int] = {}
    next_id = g.fresh_id()
    for x in sorted(external):
        for ci in cs.clusters_containing(x):
            split_of[(x, ci)] = next_id
            next_id += 1

    edges: list[tuple[int, int]] = [
        (x, sid) for (x, _), sid in split_of.items()
    ]
    for a, b in g.edges():
        homes = [
            ci for ci, c in enumerate(cs.clusters) if a in c and b in c
        ]
        assert len(homes) == 1, "every edge must lie in exactly one cluster"
        ci = homes[0]
        a2 = split_of[(a, ci)] if a in external else a
        b2 = split_of[(b, ci)] if b in external else b
        edges.append((a2, b2))

    verts = list(g.vertices) + sorted(split_of.values())
    graph = Graph.from_edges(verts, edges)
    back_map = {sid: key for key, sid in split_of.items()}
    return SfvsInstance(graph, frozenset(external), k, back_map)


def find_terminal_cycle(g: Graph, terminals: frozenset[int]) -> list[int] | None:
    """A shortest cycle through any terminal, or None.

    Deterministic: minimizes (length, terminal, first neighbor), then takes
    the lex-smallest closing path.
    """
    best: tuple[int, int, int] | None = None
    for x in sorted(terminals):
        if not g.has_vertex(x):
            continue
        for u in g.neighbors(x):

            def adj(a: int, _x: int = x, _u: int = u):
                for b in g.neighbors(a):
                    if (a, b) in ((_x, _u), (_u, _x)):
                        continue
                    yield b

            dist = bfs_distances(adj, x)
            if u not in dist:
                continue
            if best is None or (dist[u] + 1, x, u) < best:
                best = (dist[u] + 1, x, u)
    if best is None:
        return None
    _, x, u = best

    def adj2(a: int):
        for b in g.neighbors(a):
            if (a, b) in ((x, u), (u, x)):
                continue
            yield b

    path = lex_shortest_path(adj2, x, u)
    assert path is not None
    return path


def solve_sfvs(inst: SfvsInstance) -> frozenset[int] | None:
    """Minimum-size set within budget whose removal leaves no terminal cycle.

    Returns the lexicographically smallest among minimum-size solutions, or
    None when no solution of size <= k exists.  Strategy: branch on the
    vertices of a shortest terminal cycle; if the shortest such cycle is very
    long, fall back to increasing-size subset enumeration (whose first hit is
    automatically the lex-min of its size).
    """
    g0, terms, k = inst.graph, inst.terminals, inst.k
    if k < 0:
        return None
    first = find_terminal_cycle(g0, terms)
    if first is None:
        return frozenset()
    if len(first) > _LONG_CYCLE:
        for size in range(1, k + 1):
            for combo in combinations(g0.vertices, size):
                if find_terminal_cycle(g0.delete_vertices(combo), terms) is None:
                    return frozenset(combo)
        return None

    best: frozenset[int] | None = None

    def key(s: frozenset[int]) -> tuple[int, tuple[int, ...]]:
        return (len(s), tuple(sorted(s)))

    def search(g: Graph, chosen: set[int]) -> None:
        nonlocal best
        cycle = find_terminal_cycle(g, terms)
        if cycle is None:
            cand = frozenset(chosen)
            if best is None or key(cand) < key(best):
                best = cand
            return
        limit = k if best is None else min(k, len(best))
        if len(chosen) + 1 > limit:
            return  # even one more deletion cannot beat what we have
        for v in sorted(cycle):
            chosen.add(v)
            search(g.delete_vertex(v), chosen)
            chosen.remove(v)

    search(g0, set())
    return best


def lift_solution(inst: SfvsInstance, s_prime: frozenset[int]) -> frozenset[int]:
    """Map a split-graph solution back to original vertices.

    Split vertices in the solution are replaced by the external vertex they
    were split from (their unique terminal neighbor), so the result never
    grows.
    """
    lifted = set()
    for v in s_prime:
        origin = inst.back_map.get(v)
        lifted.add(v if origin is None else origin[0])
    return frozenset(lifted)
