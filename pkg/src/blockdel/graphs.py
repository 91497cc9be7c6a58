"""Core graph type, block decomposition, and target-class membership tests.

Everything downstream (obstruction search, the solvers, the kernel) works in
terms of the primitives here: an immutable simple graph with stable integer
vertex ids, its decomposition into blocks (maximal biconnected subgraphs),
and the predicate ``is_in_phi`` saying whether every block with an edge is
small enough and belongs to the chosen block-hereditary class.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from collections import deque
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass


class GraphFormatError(ValueError):
    """Raised on malformed edge-list input; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class Graph:
    """An immutable simple undirected graph over integer vertex ids.

    Neighbor lists are kept as sorted tuples, so edge lookups are binary
    searches and every iteration order is deterministic.  All mutating
    operations return a new ``Graph``; ids of surviving vertices never
    change, which lets solvers report solutions in original-instance
    coordinates no matter how many deletions happened in between.
    """

    __slots__ = ("_adj", "_verts", "_m", "_hash", "_bd")

    def __init__(self, adj: dict[int, tuple[int, ...]]):
        # Internal constructor: use from_edges() or the mutators instead.
        self._verts: tuple[int, ...] = tuple(sorted(adj))
        self._adj: dict[int, tuple[int, ...]] = {v: adj[v] for v in self._verts}
        self._m: int = sum(len(ns) for ns in adj.values()) // 2
        self._hash: int | None = None
        self._bd: BlockDecomposition | None = None  # derived-value cache only

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[int] = (),
        edges: Iterable[tuple[int, int]] = (),
    ) -> Graph:
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls({v: tuple(sorted(ns)) for v, ns in adj.items()})

    # -- queries ---------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        """All vertex ids in ascending order."""
        return self._verts

    @property
    def n(self) -> int:
        return len(self._verts)

    @property
    def m(self) -> int:
        return self._m

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        ns = self._adj[u]
        i = bisect_left(ns, v)
        return i < len(ns) and ns[i] == v

    def neighbors_in(self, v: int, among: frozenset[int] | set[int]) -> tuple[int, ...]:
        """Neighbors of ``v`` restricted to the given vertex set."""
        return tuple(w for w in self._adj[v] if w in among)

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, ascending lexicographically."""
        for u in self._verts:
            for w in self._adj[u]:
                if w > u:
                    yield (u, w)

    def fresh_id(self) -> int:
        """An id strictly larger than every existing vertex id."""
        return self._verts[-1] + 1 if self._verts else 0

    # -- mutators (persistent: each returns a new Graph) -----------------

    def delete_vertices(self, dead: Iterable[int]) -> Graph:
        doomed = set(dead)
        unknown = doomed.difference(self._adj)
        if unknown:
            raise KeyError(f"cannot delete unknown vertices {sorted(unknown)}")
        return Graph(
            {
                v: tuple(w for w in ns if w not in doomed)
                for v, ns in self._adj.items()
                if v not in doomed
            }
        )

    def delete_vertex(self, v: int) -> Graph:
        return self.delete_vertices((v,))

    def induced(self, keep: Iterable[int]) -> Graph:
        kept = set(keep)
        unknown = kept.difference(self._adj)
        if unknown:
            raise KeyError(f"unknown vertices {sorted(unknown)}")
        return Graph({v: tuple(w for w in self._adj[v] if w in kept) for v in kept})

    def delete_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        gone: set[tuple[int, int]] = set()
        for u, v in edges:
            if not self.has_edge(u, v):
                raise ValueError(f"no edge {u}-{v} to delete")
            gone.add((u, v))
            gone.add((v, u))
        return Graph(
            {v: tuple(w for w in ns if (v, w) not in gone) for v, ns in self._adj.items()}
        )

    def add_vertex(self, v: int) -> Graph:
        if v in self._adj:
            raise ValueError(f"vertex {v} already present")
        adj = dict(self._adj)
        adj[int(v)] = ()
        return Graph(adj)

    def add_edge(self, u: int, v: int) -> Graph:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if u not in self._adj or v not in self._adj:
            raise KeyError(f"unknown endpoint in edge {u}-{v}")
        if self.has_edge(u, v):
            raise ValueError(f"edge {u}-{v} already present")
        adj = dict(self._adj)
        adj[u] = tuple(sorted(adj[u] + (v,)))
        adj[v] = tuple(sorted(adj[v] + (u,)))
        return Graph(adj)

    def contract_edge(self, u: int, v: int) -> Graph:
        """Contract edge u-v, keeping the label ``u``; merged duplicates collapse."""
        if not self.has_edge(u, v):
            raise ValueError(f"no edge {u}-{v} to contract")
        kept_edges: list[tuple[int, int]] = []
        for a, b in self.edges():
            if a == v:
                a = u
            if b == v:
                b = u
            if a != b:
                kept_edges.append((a, b))
        verts = (w for w in self._verts if w != v)
        return Graph.from_edges(verts, kept_edges)

    # -- connectivity ----------------------------------------------------

    def component_of(self, s: int) -> frozenset[int]:
        comp = {s}
        queue = deque((s,))
        while queue:
            v = queue.popleft()
            for w in self._adj[v]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        return frozenset(comp)

    def components(self) -> tuple[frozenset[int], ...]:
        seen: set[int] = set()
        out: list[frozenset[int]] = []
        for s in self._verts:
            if s in seen:
                continue
            comp = self.component_of(s)
            seen |= comp
            out.append(comp)
        return tuple(out)

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.component_of(self._verts[0])) == self.n

    def is_biconnected(self) -> bool:
        """Connected with no cut vertex.  K1 and K2 count; the empty graph does not."""
        return self.n > 0 and len(block_decomposition(self).blocks) == 1

    # -- value semantics -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._verts, tuple(self._adj[v] for v in self._verts)))
        return self._hash

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks, cut vertices, and the bipartite containment forest between them.

    ``blocks`` are vertex sets sorted by their sorted vertex tuple (so block
    indices are deterministic); ``block_tree`` holds (block index, cut vertex)
    pairs, one per containment.
    """

    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    block_tree: tuple[tuple[int, int], ...]

    def blocks_containing(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.blocks) if v in b)

    def cut_vertices_in(self, i: int) -> frozenset[int]:
        return self.blocks[i] & self.cut_vertices

    def leaf_block_indices(self) -> tuple[int, ...]:
        """Indices of blocks containing at most one cut vertex.

        This includes blocks that are whole components (zero cut vertices);
        callers that need proper leaves of the block tree filter those out.
        """
        return tuple(
            i for i, b in enumerate(self.blocks) if len(b & self.cut_vertices) <= 1
        )


def block_decomposition(g: Graph) -> BlockDecomposition:
    """Decompose ``g`` into blocks and cut vertices (iterative low-point DFS).

    Isolated vertices become single-vertex blocks, so every vertex belongs to
    at least one block and the block forest spans the whole graph.
    """
    bd = g._bd
    if bd is None:
        bd = _compute_blocks(g)
        g._bd = bd
    return bd


def _compute_blocks(g: Graph) -> BlockDecomposition:
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, int] = {}
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()
    clock = 0
    for root in g.vertices:
        if root in disc:
            continue
        if not g.neighbors(root):
            disc[root] = clock
            clock += 1
            blocks.append(frozenset((root,)))
            continue
        disc[root] = low[root] = clock
        clock += 1
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        stack: list[tuple[int, Iterator[int]]] = [(root, iter(g.neighbors(root)))]
        while stack:
            v, it = stack[-1]
            descended = False
            for w in it:
                if w not in disc:
                    parent[w] = v
                    disc[w] = low[w] = clock
                    clock += 1
                    edge_stack.append((v, w))
                    if v == root:
                        root_children += 1
                    stack.append((w, iter(g.neighbors(w))))
                    descended = True
                    break
                if w != parent.get(v) and disc[w] < disc[v]:
                    # back edge, recorded once from the deeper endpoint
                    edge_stack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if descended:
                continue
            stack.pop()
            if not stack:
                break
            u = stack[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] >= disc[u]:
                # u separates the finished subtree: pop one block
                members: set[int] = set()
                while True:
                    e = edge_stack.pop()
                    members.add(e[0])
                    members.add(e[1])
                    if e == (u, v):
                        break
                blocks.append(frozenset(members))
                if u != root:
                    cuts.add(u)
        if root_children >= 2:
            cuts.add(root)
        assert not edge_stack, "block edge stack failed to drain"
    blocks.sort(key=lambda b: tuple(sorted(b)))
    tree = tuple(
        (i, c) for i, b in enumerate(blocks) for c in sorted(b & cuts)
    )
    return BlockDecomposition(tuple(blocks), frozenset(cuts), tree)


@dataclass(frozen=True)
class PClassSpec:
    """A block-hereditary class of biconnected graphs.

    The named kinds carry closed-form membership tests; ``custom`` delegates
    to ``recognizer``, which is only ever queried on biconnected graphs and
    whose block-hereditarity is the caller's contract (see
    ``spot_check_block_hereditary`` for a sampling-based sanity net).
    A ``degenerate`` class contains no graph with an edge, which the solvers
    must route to a vertex-cover-style path.
    """

    kind: str  # "all" | "cliques" | "cycles" | "custom"
    name: str
    recognizer: Callable[[Graph], bool] | None = None
    degenerate: bool = False

    def __post_init__(self) -> None:
        if self.kind not in ("all", "cliques", "cycles", "custom"):
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "custom" and self.recognizer is None and not self.degenerate:
            raise ValueError("custom class needs a recognizer")


ALL_BICONNECTED = PClassSpec("all", "biconnected")
CLIQUES = PClassSpec("cliques", "cliques")
CYCLES_AND_K2 = PClassSpec("cycles", "cycles")


def block_in_class(g: Graph, block: Iterable[int], p: PClassSpec) -> bool:
    """Is the biconnected induced subgraph on ``block`` a member of ``p``?

    Single-vertex blocks are always permitted (the problem only constrains
    blocks with at least one edge).
    """
    bs = sorted(block)
    if len(bs) <= 1:
        return True
    if p.degenerate:
        return False
    if p.kind == "all":
        return True
    if p.kind == "cliques":
        return all(g.has_edge(u, v) for i, u in enumerate(bs) for v in bs[i + 1 :])
    if p.kind == "cycles":
        if len(bs) == 2:
            return True
        members = set(bs)
        if any(len(g.neighbors_in(v, members)) != 2 for v in bs):
            return False
        # degree-2 everywhere: a single cycle iff additionally connected
        seen = {bs[0]}
        queue = deque((bs[0],))
        while queue:
            v = queue.popleft()
            for w in g.neighbors_in(v, members):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(bs)
    assert p.recognizer is not None
    return p.recognizer(g.induced(bs))


def is_in_phi(g: Graph, p: PClassSpec, d: int) -> bool:
    """True iff every block of ``g`` with an edge has at most ``d`` vertices
    and belongs to ``p``."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    for b in block_decomposition(g).blocks:
        if len(b) >= 2 and (len(b) > d or not block_in_class(g, b, p)):
            return False
    return True


# -- edge-list text format ----------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the `n m` / `u v` edge-list format; `#` comments and blanks ignored."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    n = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            what = "header 'n m'" if header is None else "edge 'u v'"
            raise GraphFormatError(line_no, f"expected {what}, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(line_no, f"expected two integers, got {line!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError(line_no, "n and m must be non-negative")
            header = (a, b)
            n = a
            continue
        if not 0 <= a < b < n:
            raise GraphFormatError(line_no, f"edge must satisfy 0 <= u < v < n; got {a} {b}")
        if (a, b) in seen:
            raise GraphFormatError(line_no, f"duplicate edge {a} {b}")
        seen.add((a, b))
        edges.append((a, b))
    if header is None:
        raise GraphFormatError(1, "missing 'n m' header")
    if len(edges) != header[1]:
        raise GraphFormatError(1, f"header promised {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(range(n), edges)


def format_edge_list(g: Graph) -> str:
    """Serialize; vertices are renumbered 0..n-1 by ascending original id."""
    order = {v: i for i, v in enumerate(g.vertices)}
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{order[u]} {order[v]}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def simple_cycles(g: Graph) -> Iterator[tuple[int, ...]]:
    """Enumerate every simple cycle exactly once, in canonical orientation.

    Each cycle is reported as a vertex tuple starting at its smallest vertex,
    walking toward the smaller of that vertex's two cycle neighbors — so of
    the two traversal directions only one is emitted.  Exponential in general;
    meant for small oracle graphs.
    """

    def extend(path: list[int], used: set[int]) -> Iterator[tuple[int, ...]]:
        v = path[-1]
        start = path[0]
        for w in g.neighbors(v):
            if w == start and len(path) >= 3 and path[1] < path[-1]:
                yield tuple(path)
            elif w > start and w not in used:
                used.add(w)
                path.append(w)
                yield from extend(path, used)
                path.pop()
                used.remove(w)

    for s in g.vertices:
        yield from extend([s], {s})


def bfs_distances(adj: Callable[[int], Iterable[int]], src: int) -> dict[int, int]:
    """Unweighted distances from ``src`` under an arbitrary adjacency callable.

    Callers pass restricted adjacencies (forbidden vertices or edges filtered
    out) to search subgraphs without materializing them.
    """
    dist = {src: 0}
    queue = deque((src,))
    while queue:
        v = queue.popleft()
        for w in adj(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def lex_shortest_path(
    adj: Callable[[int], Iterable[int]], src: int, dst: int
) -> list[int] | None:
    """Lexicographically smallest shortest path from ``src`` to ``dst``.

    Computes distances from ``dst`` and then greedily walks from ``src``,
    always taking the smallest-id neighbor that moves one step closer.  The
    adjacency callable must describe a symmetric relation.
    """
    dist = bfs_distances(adj, dst)
    if src not in dist:
        return None
    path = [src]
    v = src
    while v != dst:
        v = min(w for w in adj(v) if dist.get(w) == dist[v] - 1)
        path.append(v)
    return path


def spot_check_block_hereditary(
    p: PClassSpec,
    members: Iterable[Graph],
    rng: random.Random,
    rounds: int = 25,
) -> bool:
    """Sampling sanity check for custom classes (test surface).

    From each accepted member, delete random vertex subsets and confirm every
    surviving block with an edge is still accepted.  Catches gross violations
    of the block-hereditarity contract; not a proof.
    """
    pool = [g for g in members if g.is_biconnected() and block_in_class(g, g.vertices, p)]
    for g in pool:
        for _ in range(rounds):
            if g.n <= 1:
                break
            drop = rng.sample(g.vertices, rng.randint(1, g.n - 1))
            h = g.delete_vertices(drop)
            for b in block_decomposition(h).blocks:
                if len(b) >= 2 and not block_in_class(h, b, p):
                    return False
    return True
