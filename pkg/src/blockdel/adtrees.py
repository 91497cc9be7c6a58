"""Anchored-tree packing and the bipartite expansion argument.

Given a graph, a set of anchor vertices ``a``, and integers ``d`` and ``k``,
an anchored tree is a tree subgraph with at least ``d`` vertices whose leaves
all lie in the anchor set.  ``find_ad_trees`` either packs ``k`` pairwise
vertex-disjoint anchored trees or produces a small separator whose removal
leaves every component with fewer than ``d`` anchors — the dichotomy that
powers the sunflower-style reduction rules of the kernelizer.

``expansion`` is the classic bipartite expansion construction: given sides X
and Y with ``|Y| >= alpha * |X|`` and no isolated Y-vertex, it selects subsets
X', Y' and an assignment of ``alpha`` private Y'-partners to every member of
X' such that Y' has no neighbors outside X'.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable
from dataclasses import dataclass

from .graphs import Graph

__all__ = [
    "ADTreeResult",
    "ExpansionResult",
    "expansion",
    "find_ad_trees",
]


@dataclass(frozen=True)
class ADTreeResult:
    """Either ``k`` disjoint anchored trees or an anchor-scattering separator."""

    trees: tuple[Graph, ...] | None = None
    separator: frozenset[int] | None = None

    def __post_init__(self) -> None:
        if (self.trees is None) == (self.separator is None):
            raise ValueError("exactly one of trees/separator must be given")


def _tree_leaves(t: Graph) -> list[int]:
    # a single vertex counts as its own leaf
    return [v for v in t.vertices if t.degree(v) <= 1]


def _check_result(
    g: Graph, anchors: frozenset[int], d: int, k: int, res: ADTreeResult
) -> ADTreeResult:
    """Structural contract, asserted on every call."""
    if res.trees is not None:
        assert len(res.trees) == k
        claimed: set[int] = set()
        for t in res.trees:
            assert t.n >= d
            assert t.m == t.n - 1 and t.is_connected()
            assert all(g.has_edge(u, v) for u, v in t.edges())
            assert all(g.has_vertex(v) for v in t.vertices)
            assert not claimed.intersection(t.vertices)
            claimed.update(t.vertices)
            assert all(v in anchors for v in _tree_leaves(t))
    else:
        sep = res.separator
        assert sep is not None
        assert len(sep) <= 2 * (2 * k - 1) * (d * d - d + 1)
        for comp in g.delete_vertices(sep).components():
            assert len(comp & anchors) < d
    return res


def _path_between(
    g: Graph, inside: set[int], sources: Iterable[int], targets: Iterable[int]
) -> list[int]:
    """Deterministic shortest path from one vertex set to another.

    Runs a breadth-first search from the target side restricted to
    ``inside``, starts at the source vertex with the smallest (distance, id)
    pair, and walks down the distance gradient through smallest-id
    neighbors.  The interior of the result avoids both endpoint sets.
    """
    dist: dict[int, int] = {}
    queue: deque[int] = deque()
    for t in sorted(targets):
        dist[t] = 0
        queue.append(t)
    while queue:
        v = queue.popleft()
        for w in g.neighbors(v):
            if w in inside and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    _, start = min((dist[s], s) for s in sources if s in dist)
    path = [start]
    v = start
    while dist[v] > 0:
        v = min(w for w in g.neighbors(v) if w in inside and dist.get(w) == dist[v] - 1)
        path.append(v)
    return path


def _add_path(adj: dict[int, set[int]], path: list[int]) -> None:
    for v in path:
        adj.setdefault(v, set())
    for u, v in zip(path, path[1:]):
        adj[u].add(v)
        adj[v].add(u)


def _forest_components(adj: dict[int, set[int]]) -> list[set[int]]:
    seen: set[int] = set()
    comps: list[set[int]] = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _as_tree_graph(adj: dict[int, set[int]], verts: set[int]) -> Graph:
    edges = [(u, v) for u in verts for v in adj[u] if v in verts and u < v]
    return Graph.from_edges(sorted(verts), edges)


def _steiner_of(adj: dict[int, set[int]], verts: set[int], marks: set[int]) -> Graph:
    """Minimal subtree of ``verts`` spanning ``marks``: prune bare leaves."""
    local = {v: set(adj[v]) & verts for v in verts}
    changed = True
    while changed:
        changed = False
        for v in sorted(local):
            if len(local[v]) <= 1 and v not in marks:
                for w in local[v]:
                    local[w].discard(v)
                del local[v]
                changed = True
    keep = set(local)
    return _as_tree_graph(local, keep)


def _harvest(
    hadj: dict[int, set[int]], anchors: frozenset[int], d: int, k: int
) -> list[Graph]:
    """Extract ``k`` disjoint anchored trees from an anchor-rich forest.

    Repeatedly finds a deepest node whose subtree holds at least ``d``
    anchors while every child subtree holds fewer, carves out the minimal
    subtree spanning those anchors, and discards the carved part.  Bounded
    degrees cap each carve at ``d*d - d + 1`` anchors, which makes the count
    work out.
    """
    found: list[Graph] = []
    for comp in _forest_components(hadj):
        adj = {v: set(hadj[v]) for v in comp}
        while len(found) < k and adj:
            internal = [v for v in sorted(adj) if len(adj[v]) >= 2]
            root = internal[0] if internal else min(adj)
            order = [root]
            parent: dict[int, int | None] = {root: None}
            for v in order:
                for w in sorted(adj[v]):
                    if w not in parent:
                        parent[w] = v
                        order.append(w)
            weight = {v: 0 for v in order}
            for v in reversed(order):
                if v in anchors:
                    weight[v] += 1
                p = parent[v]
                if p is not None:
                    weight[p] += weight[v]
            if weight[root] < d:
                break
            node = root
            while True:
                heavy = [
                    c for c in adj[node] if parent[c] == node and weight[c] >= d
                ]
                if not heavy:
                    break
                node = min(heavy)
            sub = {node}
            queue = deque([node])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if parent[w] == u and w not in sub:
                        sub.add(w)
                        queue.append(w)
            found.append(_steiner_of(adj, sub, set(anchors & sub)))
            for v in sub:
                for w in adj[v]:
                    adj[w].discard(v)
                del adj[v]
        if len(found) >= k:
            break
    assert len(found) >= k
    return found[:k]


def find_ad_trees(g: Graph, a: Iterable[int], d: int, k: int) -> ADTreeResult:
    """Pack ``k`` disjoint anchored trees or separate the anchors.

    Grows a forest whose components are anchored trees: each step either
    routes a shortest path from a fresh anchor to a degree-two node of the
    forest, or seeds a new tree gathering ``d`` anchors in an untouched
    component.  The loop stops when the forest has ``k`` components, when it
    holds enough anchors to carve ``k`` trees out of it, or when no
    component of the graph minus the forest's anchors and non-degree-two
    nodes has ``d`` anchors left — in which case those removed vertices are
    the separator.
    """
    anchors = frozenset(a)
    if d < 1 or k < 1:
        raise ValueError("d and k must be positive")
    if not anchors <= set(g.vertices):
        raise ValueError("anchor set must be a subset of the vertices")

    enough = (2 * k - 1) * (d * d - d + 1)
    hadj: dict[int, set[int]] = {}
    while True:
        comps = _forest_components(hadj)
        if len(comps) >= k:
            trees = tuple(_as_tree_graph(hadj, c) for c in comps[:k])
            return _check_result(g, anchors, d, k, ADTreeResult(trees=trees))
        hverts = set(hadj)
        if len(hverts & anchors) >= enough:
            trees = tuple(_harvest(hadj, anchors, d, k))
            return _check_result(g, anchors, d, k, ADTreeResult(trees=trees))

        odd = {v for v in hadj if len(hadj[v]) != 2}
        blocked = (hverts & anchors) | odd
        rest = g.delete_vertices(blocked)
        grow: set[int] | None = None
        for comp in sorted(rest.components(), key=min):
            if len(comp & anchors) >= d:
                grow = set(comp)
                break
        if grow is None:
            sep = frozenset(blocked)
            return _check_result(g, anchors, d, k, ADTreeResult(separator=sep))

        met = grow & hverts
        if met:
            # extend: the touched forest nodes all have degree two, so the
            # attachment keeps degrees within bounds and adds one anchor
            path = _path_between(g, grow, grow & anchors, met)
            _add_path(hadj, path)
        else:
            # seed a fresh tree on d anchors inside the untouched component
            seed = min(grow & anchors)
            qadj: dict[int, set[int]] = {seed: set()}
            for _ in range(d - 1):
                path = _path_between(
                    g, grow, set(qadj), (grow & anchors) - set(qadj)
                )
                _add_path(qadj, path)
            for v, nbrs in qadj.items():
                hadj.setdefault(v, set()).update(nbrs)


# ---------------------------------------------------------------------------
# bipartite expansion


@dataclass
class ExpansionResult:
    """Chosen sides and the private-partner assignment."""

    x_prime: frozenset
    y_prime: frozenset
    phi: dict[Hashable, frozenset]


def _max_capacity_matching(
    x_order: list[Hashable],
    y_order: list[Hashable],
    nbrs: dict[Hashable, list[Hashable]],
    alpha: int,
) -> dict[Hashable, tuple[Hashable, int]]:
    """Maximum matching where each x-side label may take ``alpha`` partners.

    Implemented as the plain augmenting-path algorithm over ``alpha``
    explicit copies of every x label; returns the partner map keyed by
    y label.
    """
    yset = set(y_order)
    taken: dict[Hashable, tuple[Hashable, int]] = {}
    holds: dict[tuple[Hashable, int], list[Hashable]] = {}

    def augment(copy: tuple[Hashable, int], visited: set[Hashable]) -> bool:
        for yl in nbrs[copy[0]]:
            if yl not in yset or yl in visited:
                continue
            visited.add(yl)
            rival = taken.get(yl)
            if rival is None or augment(rival, visited):
                if rival is not None:
                    holds[rival].remove(yl)
                taken[yl] = copy
                holds.setdefault(copy, []).append(yl)
                return True
        return False

    for xl in x_order:
        for i in range(alpha):
            augment((xl, i), set())
    return taken


def expansion(
    x: Iterable[Hashable],
    y: Iterable[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    alpha: int,
) -> ExpansionResult:
    """Select X', Y', and ``alpha`` private partners per chosen x.

    Repeatedly computes a maximum matching with x-side capacity ``alpha``;
    a fully saturated matching yields the assignment directly, and
    otherwise the alternating-reachability set is a deficient part that can
    be dropped (together with its whole neighborhood) without breaking the
    preconditions, so the loop shrinks until saturation.
    """
    if alpha < 1:
        raise ValueError("alpha must be positive")
    x_order = list(dict.fromkeys(x))
    y_order = list(dict.fromkeys(y))
    if not x_order:
        raise ValueError("x side must be non-empty")
    xset, yset = set(x_order), set(y_order)
    nbrs: dict[Hashable, list[Hashable]] = {xl: [] for xl in x_order}
    nbrs_y: dict[Hashable, list[Hashable]] = {yl: [] for yl in y_order}
    edge_set: set[tuple[Hashable, Hashable]] = set()
    for xe, ye in edges:
        if xe not in xset or ye not in yset:
            raise ValueError("edge endpoints must come from x and y")
        if (xe, ye) in edge_set:
            continue
        edge_set.add((xe, ye))
        nbrs[xe].append(ye)
        nbrs_y[ye].append(xe)
    if len(y_order) < alpha * len(x_order):
        raise ValueError("y side too small for the requested expansion")
    if any(not nbrs_y[yl] for yl in y_order):
        raise ValueError("every y vertex needs a neighbor in x")

    x_cur, y_cur = x_order, y_order
    while True:
        taken = _max_capacity_matching(x_cur, y_cur, nbrs, alpha)
        per_x: dict[Hashable, list[Hashable]] = {xl: [] for xl in x_cur}
        for yl, (xl, _) in taken.items():
            per_x[xl].append(yl)
        if all(len(per_x[xl]) == alpha for xl in x_cur):
            phi = {xl: frozenset(per_x[xl]) for xl in x_cur}
            result = ExpansionResult(
                x_prime=frozenset(x_cur),
                y_prime=frozenset(y_cur),
                phi=phi,
            )
            _check_expansion(edge_set, xset, result, alpha)
            return result

        # alternating reachability from every unsaturated x label: its
        # whole neighborhood is matched back into the reached set, so the
        # reached labels form a deficient part
        y_curset = set(y_cur)
        reached_x = {xl for xl in x_cur if len(per_x[xl]) < alpha}
        reached_y: set[Hashable] = set()
        frontier = sorted(reached_x, key=repr)
        while frontier:
            nxt: list[Hashable] = []
            for xl in frontier:
                for yl in nbrs[xl]:
                    if yl in y_curset and yl not in reached_y:
                        reached_y.add(yl)
                        rival = taken.get(yl)
                        assert rival is not None  # else an augmenting path
                        if rival[0] not in reached_x:
                            reached_x.add(rival[0])
                            nxt.append(rival[0])
            frontier = nxt
        assert reached_x and len(reached_x) < len(x_cur)
        x_cur = [xl for xl in x_cur if xl not in reached_x]
        y_cur = [yl for yl in y_cur if yl not in reached_y]


def _check_expansion(
    edge_set: set[tuple[Hashable, Hashable]],
    xset: set[Hashable],
    res: ExpansionResult,
    alpha: int,
) -> None:
    assert res.x_prime and res.y_prime
    seen: set[Hashable] = set()
    for xl in res.x_prime:
        img = res.phi[xl]
        assert len(img) == alpha
        assert img <= res.y_prime
        assert all((xl, yl) in edge_set for yl in img)
        assert not (img & seen)
        seen |= img
    touched = {xe for xe, ye in edge_set if ye in res.y_prime}
    assert touched & xset == set(res.x_prime)
