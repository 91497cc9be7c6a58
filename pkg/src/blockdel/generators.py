"""Deterministic instance generators.

All randomness flows through SplitMix64 so that a (generator, seed) pair
yields byte-identical graphs on every platform and Python version.  Also
hosts the hardness construction that turns a k x k multipartite clique
question into a deletion instance on a split graph.
"""

from __future__ import annotations

from itertools import combinations

from .branching import Instance
from .graphs import ALL_BICONNECTED, Graph

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 mixer: tiny state, full 64-bit output, portable.

    Stream for seed 0 starts 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, ...
    (pinned in the tests).
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return self.next_u64() / 2**64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive.  Uses a plain modulus:
        the bias is negligible for test-sized ranges and the outputs stay
        reproducible everywhere."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randint(0, len(seq) - 1)]


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi style graph on vertices 0..n-1.

    Pairs are visited in ascending (u, v) order, one PRNG draw per pair,
    so the edge set is a pure function of (n, p, seed).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = SplitMix64(seed)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(range(n), edges)


def cycle_of_cliques(clique_sizes: list[int]) -> Graph:
    """Cliques glued in a ring, consecutive ones sharing a single vertex.

    The ring closes up, so the result is one biconnected graph (no vertex
    disconnects it) — handy as an oversized-block specimen.  Needs at
    least three cliques so the sharing pattern is well defined.
    """
    if len(clique_sizes) < 3:
        raise ValueError("need at least three cliques")
    if any(s < 2 for s in clique_sizes):
        raise ValueError("clique sizes must be at least 2")
    t = len(clique_sizes)
    joints = list(range(t))
    nxt = t
    edges: list[tuple[int, int]] = []
    for i, size in enumerate(clique_sizes):
        members = [joints[i], joints[(i + 1) % t]]
        for _ in range(size - 2):
            members.append(nxt)
            nxt += 1
        members.sort()
        edges.extend(combinations(members, 2))
    return Graph.from_edges(range(nxt), sorted(set(edges)))


def chain_of_cliques(clique_sizes: list[int]) -> Graph:
    """Cliques glued in a path, consecutive ones sharing a cut vertex.

    Unlike the ring version the shared vertices really are cut vertices,
    so the blocks are exactly the cliques.
    """
    if not clique_sizes:
        raise ValueError("need at least one clique")
    if any(s < 2 for s in clique_sizes):
        raise ValueError("clique sizes must be at least 2")
    edges: list[tuple[int, int]] = []
    joint = 0
    nxt = 1
    for size in clique_sizes:
        members = [joint]
        for _ in range(size - 1):
            members.append(nxt)
            nxt += 1
        members.sort()
        edges.extend(combinations(members, 2))
        joint = members[-1]
    return Graph.from_edges(range(nxt), sorted(set(edges)))


def theta_graph(path_lengths: list[int]) -> Graph:
    """Two poles joined by internally disjoint paths of the given edge
    counts (each >= 1, at most one equal to 1)."""
    if len(path_lengths) < 2:
        raise ValueError("need at least two paths")
    if any(L < 1 for L in path_lengths):
        raise ValueError("path lengths are edge counts, at least 1")
    if sum(1 for L in path_lengths if L == 1) > 1:
        raise ValueError("at most one direct edge between the poles")
    edges: list[tuple[int, int]] = []
    nxt = 2
    for length in path_lengths:
        prev = 0
        for step in range(length - 1):
            edges.append(tuple(sorted((prev, nxt))))
            prev = nxt
            nxt += 1
        edges.append(tuple(sorted((prev, 1))))
    return Graph.from_edges(range(nxt), sorted(set(edges)))


# --------------------------------------------------------------------------
# k x k multipartite clique hardness construction
# --------------------------------------------------------------------------


def random_grid(k: int, p: float, seed: int, plant_clique: bool = False) -> Graph:
    """Random graph on k*k vertices whose columns (v mod k) are independent
    sets; optionally plants a clique with one vertex per column."""
    if k < 1:
        raise ValueError("k must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = SplitMix64(seed)
    n = k * k
    edges = set()
    for u in range(n):
        for v in range(u + 1, n):
            if u % k != v % k and rng.random() < p:
                edges.add((u, v))
    if plant_clique:
        picks = [rng.randint(0, k - 1) * k + col for col in range(k)]
        for u, v in combinations(sorted(picks), 2):
            edges.add((u, v))
    return Graph.from_edges(range(n), sorted(edges))


def grid_has_column_clique(g: Graph, k: int) -> bool:
    """Exhaustively checks for a k-clique (necessarily one per column)."""

    def rec(col: int, chosen: list[int]) -> bool:
        if col == k:
            return True
        for row in range(k):
            v = row * k + col
            if all(g.has_edge(v, w) for w in chosen):
                chosen.append(v)
                if rec(col + 1, chosen):
                    return True
                chosen.pop()
        return False

    return rec(0, [])


def gen_kxk_reduction(grid: Graph, k: int) -> Instance:
    """Deletion instance that is YES exactly when the grid has a k-clique.

    The grid must have vertices 0..k*k-1 with column v mod k independent.
    Output graph: the grid vertices plus one "selector" vertex per grid
    edge form a clique; a second, independent copy of the edge set hangs
    off it, each copy vertex adjacent to its edge's two endpoints and its
    selector.  Budget stays k and d is chosen so the surviving big block
    must shed exactly a column-clique's worth of vertices.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = k * k
    if grid.vertices != tuple(range(n)):
        raise ValueError(f"grid must have vertices 0..{n - 1}")
    for u, v in grid.edges():
        if u % k == v % k:
            raise ValueError(
                f"edge {u}-{v} lies inside column {u % k}; columns must be "
                "independent"
            )

    grid_edges = list(grid.edges())
    m = len(grid_edges)
    sel = {e: n + i for i, e in enumerate(grid_edges)}          # clique side
    cop = {e: n + m + i for i, e in enumerate(grid_edges)}      # independent side
    total = n + 2 * m

    clique_side = list(range(n)) + [sel[e] for e in grid_edges]
    edges: set[tuple[int, int]] = set()
    for a, b in combinations(sorted(clique_side), 2):
        edges.add((a, b))
    for e in grid_edges:
        u, v = e
        c = cop[e]
        edges.add(tuple(sorted((u, c))))
        edges.add(tuple(sorted((v, c))))
        edges.add(tuple(sorted((sel[e], c))))

    gp = Graph.from_edges(range(total), sorted(edges))
    d = total - k - k * (k - 1) // 2
    if d < 1:
        raise ValueError("grid too small for the construction")
    return Instance(graph=gp, pclass=ALL_BICONNECTED, d=d, k=k)
