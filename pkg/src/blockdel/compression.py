"""Iterative-compression solvers for the clique-block and short-cycle targets.

Both solvers share one compression loop: vertices enter one at a time, the
incumbent deletion set grows by the new vertex, and as soon as it exceeds the
budget we try every way of keeping part of it and hand the remainder to a
class-specific *disjoint* routine that may only delete vertices outside that
seed set.  The disjoint routines are branching procedures whose measure is
the remaining budget plus the number of components induced by the seed set;
every reduction shrinks the part of the graph outside the seed and every
branch child shrinks the measure.  Applications of either kind are recorded
in an audit log so tests can verify both monotonicity properties hold with
no exceptions.

The solvers decide feasibility and return *some* deletion set within budget,
not necessarily a smallest one.  Degenerate parameter ranges (``d == 1`` for
cliques, ``d <= 2`` for cycles) are routed to the exhaustive branching solver
instead, which does return minimum solutions but logs no rule events.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from itertools import combinations

from .branching import Instance, Solution
from .branching import solve as _branch_solve
from .graphs import (
    CLIQUES,
    CYCLES_AND_K2,
    Graph,
    block_decomposition,
    is_in_phi,
)

__all__ = [
    "CompressionStats",
    "DisjointInstance",
    "RuleEvent",
    "solve_cactus",
    "solve_complete_block",
    "solve_disjoint_cactus",
    "solve_disjoint_complete_block",
]


@dataclass(frozen=True)
class RuleEvent:
    """One reduction application or one branch child, for the audit log.

    ``outside_*`` count vertices not yet in the seed set; ``mu_*`` is the
    branching measure (budget plus seed component count).  Reductions must
    strictly shrink the outside; branch children must strictly shrink mu.
    """

    rule: str
    kind: str  # "reduce" | "branch"
    outside_before: int
    outside_after: int
    mu_before: int
    mu_after: int


@dataclass
class CompressionStats:
    """Counters and the rule-event log for one solver run."""

    events: list[RuleEvent] = field(default_factory=list)
    compressions: int = 0
    disjoint_calls: int = 0

    def rules_fired(self) -> set[str]:
        return {e.rule for e in self.events}


@dataclass(frozen=True)
class DisjointInstance:
    """A disjoint-compression subproblem.

    ``s`` is the seed set: already known to induce a member of the target
    class, and off-limits for deletion.  The graph minus ``s`` must also lie
    in the class; the question is whether at most ``k`` deletions *outside*
    ``s`` make the whole graph a member.
    """

    graph: Graph
    s: frozenset[int]
    d: int
    k: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("block size bound d must be at least 1")
        if self.k < 0:
            raise ValueError("deletion budget k must be nonnegative")
        if not self.s.issubset(self.graph.vertices):
            raise ValueError("seed set must be a subset of the vertices")


def _mu(g: Graph, s: frozenset[int], k: int) -> int:
    return k + len(g.induced(s).components())


def _log(
    stats: CompressionStats | None,
    rule: str,
    kind: str,
    out_before: int,
    out_after: int,
    mu_before: int,
    mu_after: int,
) -> None:
    if stats is not None:
        stats.events.append(
            RuleEvent(rule, kind, out_before, out_after, mu_before, mu_after)
        )


def _scomp_map(g: Graph, s: frozenset[int]) -> dict[int, int]:
    """Map each seed vertex to the index of its component of G[s]."""
    comp: dict[int, int] = {}
    for i, c in enumerate(g.induced(s).components()):
        for v in c:
            comp[v] = i
    return comp


# ---------------------------------------------------------------------------
# compression loop


def solve_complete_block(
    inst: Instance, stats: CompressionStats | None = None
) -> Solution | None:
    """Decide deletion to blocks that are cliques on at most ``d`` vertices.

    Runs iterative compression with the clique-target disjoint routine.  The
    returned deletion set respects the budget but need not be minimum.  For
    ``d == 1`` the problem degenerates to vertex cover and is handed to the
    exhaustive branching solver.
    """
    if inst.pclass.kind != "cliques":
        raise ValueError("solve_complete_block expects the cliques class")
    if inst.d == 1:
        return _branch_solve(inst)
    return _compress_loop(inst, _dcb, stats)


def solve_cactus(
    inst: Instance, stats: CompressionStats | None = None
) -> Solution | None:
    """Decide deletion to blocks that are edges or cycles on at most ``d`` vertices.

    Runs iterative compression with the cycle-target disjoint routine.  For
    ``d <= 2`` no cycle fits inside a block, the target is the class of
    forests of edges, and the instance goes to the exhaustive branching
    solver instead.
    """
    if inst.pclass.kind != "cycles":
        raise ValueError("solve_cactus expects the cycles class")
    if inst.d <= 2:
        return _branch_solve(inst)
    return _compress_loop(inst, _dcx, stats)


def _compress_loop(
    inst: Instance,
    disjoint: Callable[..., frozenset[int] | None],
    stats: CompressionStats | None,
) -> Solution | None:
    g, d, k = inst.graph, inst.d, inst.k
    order = g.vertices
    incumbent: frozenset[int] = frozenset()
    for i, v in enumerate(order):
        live = g.induced(order[: i + 1])
        grown = incumbent | {v}
        if len(grown) <= k:
            incumbent = grown
            continue
        if stats is not None:
            stats.compressions += 1
        smaller = _compress_step(live, grown, inst, disjoint, stats)
        if smaller is None:
            # the class is closed under vertex deletion, so a prefix that
            # cannot be solved dooms the whole graph
            return None
        incumbent = smaller
    return Solution(deleted=incumbent)


def _compress_step(
    live: Graph,
    grown: frozenset[int],
    inst: Instance,
    disjoint: Callable[..., frozenset[int] | None],
    stats: CompressionStats | None,
) -> frozenset[int] | None:
    """Try to replace ``grown`` (k+1 vertices) by a solution of size <= k."""
    members = sorted(grown)
    for size in range(min(inst.k, len(members)) + 1):
        for kept_out in combinations(members, size):
            seed = grown.difference(kept_out)
            rest = live.delete_vertices(kept_out)
            if not is_in_phi(rest.induced(seed), inst.pclass, inst.d):
                continue
            if stats is not None:
                stats.disjoint_calls += 1
            extra = disjoint(rest, seed, inst.d, inst.k - size, stats)
            if extra is not None:
                return frozenset(kept_out) | extra
    return None


# ---------------------------------------------------------------------------
# public disjoint entry points


def solve_disjoint_complete_block(
    di: DisjointInstance, stats: CompressionStats | None = None
) -> frozenset[int] | None:
    """Solve a clique-target disjoint subproblem; needs ``d >= 2``.

    Returns a deletion set of at most ``di.k`` vertices, all outside
    ``di.s``, or None.  Raises if the graph minus the seed set is not
    already in the class (callers are expected to maintain that invariant).
    """
    if di.d < 2:
        raise ValueError("the clique-target disjoint routine needs d >= 2")
    if not is_in_phi(di.graph.induced(di.s), CLIQUES, di.d):
        return None
    if not is_in_phi(di.graph.delete_vertices(di.s), CLIQUES, di.d):
        raise ValueError("graph minus the seed set must already be in the class")
    return _dcb(di.graph, di.s, di.d, di.k, stats)


def solve_disjoint_cactus(
    di: DisjointInstance, stats: CompressionStats | None = None
) -> frozenset[int] | None:
    """Solve a cycle-target disjoint subproblem; needs ``d >= 3``."""
    if di.d < 3:
        raise ValueError("the cycle-target disjoint routine needs d >= 3")
    if not is_in_phi(di.graph.induced(di.s), CYCLES_AND_K2, di.d):
        return None
    if not is_in_phi(di.graph.delete_vertices(di.s), CYCLES_AND_K2, di.d):
        raise ValueError("graph minus the seed set must already be in the class")
    return _dcx(di.graph, di.s, di.d, di.k, stats)


def _try_deletions(
    rec: Callable[..., frozenset[int] | None],
    g: Graph,
    s: frozenset[int],
    d: int,
    k: int,
    stats: CompressionStats | None,
    removed: set[int],
    cands: list[int],
    rule: str,
    nout: int,
    mu: int,
) -> frozenset[int] | None:
    """Branch on deleting each candidate in turn; first success wins."""
    for c in cands:
        g2 = g.delete_vertex(c)
        _log(stats, rule, "branch", nout, nout - 1, mu, _mu(g2, s, k - 1))
        sub = rec(g2, s, d, k - 1, stats)
        if sub is not None:
            return frozenset(removed) | {c} | sub
    return None


# ---------------------------------------------------------------------------
# disjoint routine, clique target


def _cb_ok(g: Graph, vs: frozenset[int] | set[int], d: int) -> bool:
    return is_in_phi(g.induced(vs), CLIQUES, d)


def _dcb(
    g: Graph,
    s: frozenset[int],
    d: int,
    k: int,
    stats: CompressionStats | None,
) -> frozenset[int] | None:
    assert is_in_phi(g.delete_vertices(s), CLIQUES, d)
    removed: set[int] = set()
    while True:
        if k < 0:
            return None
        outside = [v for v in g.vertices if v not in s]
        if not outside:
            return frozenset(removed)
        nout = len(outside)
        mu = _mu(g, s, k)

        # nearly isolated vertices are useless to any solution
        u = next((x for x in outside if g.degree(x) <= 1), None)
        if u is not None:
            g = g.delete_vertex(u)
            _log(stats, "co:deg0-or-1", "reduce", nout, nout - 1, mu, _mu(g, s, k))
            continue

        # a vertex the seed cannot absorb must be deleted
        u = next((x for x in outside if not _cb_ok(g, s | {x}, d)), None)
        if u is not None:
            g = g.delete_vertex(u)
            removed.add(u)
            k -= 1
            _log(
                stats,
                "co:direct-obstruction",
                "reduce",
                nout,
                nout - 1,
                mu,
                _mu(g, s, k),
            )
            continue

        # a pair the seed cannot absorb together: delete one or the other
        pair = None
        for i, a in enumerate(outside):
            for b in outside[i + 1 :]:
                if not _cb_ok(g, s | {a, b}, d):
                    pair = [a, b]
                    break
            if pair:
                break
        if pair:
            return _try_deletions(
                _dcb, g, s, d, k, stats, removed, pair, "co:two-obstruction", nout, mu
            )

        comp_of = _scomp_map(g, s)

        # a vertex tying several seed components together: delete it or
        # commit it to the seed (safe to add, since the single-vertex rule
        # above is exhausted)
        u = next(
            (
                x
                for x in outside
                if len({comp_of[y] for y in g.neighbors_in(x, s)}) >= 2
            ),
            None,
        )
        if u is not None:
            res = _try_deletions(
                _dcb, g, s, d, k, stats, removed, [u], "co:remove-or-connect", nout, mu
            )
            if res is not None:
                return res
            s2 = s | {u}
            assert _cb_ok(g, s2, d)
            _log(stats, "co:remove-or-connect", "branch", nout, nout - 1, mu, _mu(g, s2, k))
            sub = _dcb(g, s2, d, k, stats)
            return frozenset(removed) | sub if sub is not None else None

        # an edge outside whose endpoints see different seed components
        epair = None
        for a in outside:
            ca = {comp_of[y] for y in g.neighbors_in(a, s)}
            if not ca:
                continue
            for b in g.neighbors(a):
                if b in s or b <= a:
                    continue
                cb = {comp_of[y] for y in g.neighbors_in(b, s)}
                if cb and cb != ca:
                    epair = (a, b)
                    break
            if epair:
                break
        if epair:
            a, b = epair
            res = _try_deletions(
                _dcb,
                g,
                s,
                d,
                k,
                stats,
                removed,
                [a, b],
                "co:remove-or-connect2",
                nout,
                mu,
            )
            if res is not None:
                return res
            s2 = s | {a, b}
            assert _cb_ok(g, s2, d)  # the pair rule above is exhausted
            _log(
                stats,
                "co:remove-or-connect2",
                "branch",
                nout,
                nout - 2,
                mu,
                _mu(g, s2, k),
            )
            sub = _dcb(g, s2, d, k, stats)
            return frozenset(removed) | sub if sub is not None else None

        if __debug__:
            for x in outside:
                hits = {comp_of[y] for y in g.neighbors_in(x, s)}
                assert len(hits) <= 1
                assert _cb_ok(g, s | {x}, d)

        # every remaining vertex attaches cleanly to one seed clique, so a
        # leaf block of the outside graph can be dealt with wholesale
        h = g.delete_vertices(s)
        bd = block_decomposition(h)
        li = bd.leaf_block_indices()[0]
        block = bd.blocks[li]
        cuts = bd.cut_vertices_in(li)
        assert len(cuts) <= 1
        core = set(block) - cuts
        attached = {x for x in block if g.neighbors_in(x, s)}

        if not (attached & core):
            g = g.delete_vertices(core)
            _log(stats, "co:all-deg0", "reduce", nout, nout - len(core), mu, _mu(g, s, k))
            continue

        if len(attached) == 1:
            (w,) = attached
            if not cuts:
                s = s | block
                _log(
                    stats,
                    "co:unique-red-nocut",
                    "reduce",
                    nout,
                    nout - len(block),
                    mu,
                    _mu(g, s, k),
                )
            else:
                s = s | {w}
                _log(stats, "co:unique-red", "reduce", nout, nout - 1, mu, _mu(g, s, k))
            assert _cb_ok(g, s, d)
            continue

        # two or more attached vertices in one clique block necessarily
        # share their seed neighborhood
        nbhds = {g.neighbors_in(x, s) for x in attached}
        assert len(nbhds) == 1
        a_size = len(next(iter(nbhds)))
        plain = set(block) - attached

        if not plain:
            spill = max(0, len(core) - d + a_size)
            doomed = sorted(core)[:spill]
            g = g.delete_vertices(doomed)
            removed.update(doomed)
            k -= spill
            s = s | (core - set(doomed))
            _log(
                stats,
                "co:two-red-empty-c2",
                "reduce",
                nout,
                nout - len(core),
                mu,
                _mu(g, s, k),
            )
            assert _cb_ok(g, s, d)
            continue

        # either every unattached vertex of the block goes, or all attached
        # ones except a cheapest survivor go
        keeper = min(attached & core)
        for doomed in (sorted(plain), sorted(attached - {keeper})):
            g2 = g.delete_vertices(doomed)
            k2 = k - len(doomed)
            _log(
                stats,
                "co:two-red",
                "branch",
                nout,
                nout - len(doomed),
                mu,
                _mu(g2, s, k2),
            )
            sub = _dcb(g2, s, d, k2, stats)
            if sub is not None:
                return frozenset(removed) | set(doomed) | sub
        return None


# ---------------------------------------------------------------------------
# disjoint routine, cycle target


def _cx_ok(g: Graph, vs: frozenset[int] | set[int], d: int) -> bool:
    return is_in_phi(g.induced(vs), CYCLES_AND_K2, d)


def _block_cycle_order(h: Graph, block: frozenset[int]) -> list[int]:
    """Vertices of a cycle block in traversal order, deterministically."""
    vs = sorted(block)
    if len(vs) <= 2:
        return vs
    bset = set(vs)
    start = vs[0]
    first = min(x for x in h.neighbors(start) if x in bset)
    order = [start, first]
    while True:
        prev, cur = order[-2], order[-1]
        nxt = [x for x in h.neighbors(cur) if x in bset and x != prev]
        assert len(nxt) == 1  # blocks of the outside graph are cycles or edges
        if nxt[0] == start:
            return order
        order.append(nxt[0])


def _chain_between(
    g: Graph, h: Graph, block: frozenset[int], a: int, b: int
) -> list[int] | None:
    """Interior of a chain from ``a`` to ``b`` inside one block, or None.

    A chain's interior vertices must have degree two in the *whole* graph,
    so they carry no seed edges and no branches; with both endpoints in one
    block any such path runs along one of the block's two arcs.
    """
    order = _block_cycle_order(h, block)
    if len(order) == 2:
        return []
    ia, ib = order.index(a), order.index(b)
    if ia > ib:
        ia, ib = ib, ia
    best: tuple[tuple[int, tuple[int, ...]], list[int]] | None = None
    for inner in (order[ia + 1 : ib], order[ib + 1 :] + order[:ia]):
        if all(g.degree(x) == 2 for x in inner):
            key = (len(inner), tuple(sorted(inner)))
            if best is None or key < best[0]:
                best = (key, inner)
    return None if best is None else best[1]


def _node_key(node: tuple, blocks: tuple[frozenset[int], ...]) -> tuple:
    kind, payload = node
    if kind == "c":
        return (payload, 0, ())
    b = blocks[payload]
    return (min(b), 1, tuple(sorted(b)))


_NO_RULE = object()


def _dcx(
    g: Graph,
    s: frozenset[int],
    d: int,
    k: int,
    stats: CompressionStats | None,
) -> frozenset[int] | None:
    assert is_in_phi(g.delete_vertices(s), CYCLES_AND_K2, d)
    removed: set[int] = set()
    while True:
        if k < 0:
            return None
        outside = [v for v in g.vertices if v not in s]
        if not outside:
            return frozenset(removed)
        nout = len(outside)
        mu = _mu(g, s, k)

        u = next((x for x in outside if g.degree(x) <= 1), None)
        if u is not None:
            g = g.delete_vertex(u)
            _log(stats, "co:deg0-or-1", "reduce", nout, nout - 1, mu, _mu(g, s, k))
            continue

        comp_of = _scomp_map(g, s)

        # delete a component-tying vertex or commit it to the seed; unlike
        # the clique target the single-vertex deletion rule ranks below this
        # one, so the commit child needs its own class check (sound: if the
        # vertex cannot join the seed it sits in every solution, and the
        # delete child covers that)
        u = next(
            (
                x
                for x in outside
                if len({comp_of[y] for y in g.neighbors_in(x, s)}) >= 2
            ),
            None,
        )
        if u is not None:
            res = _try_deletions(
                _dcx, g, s, d, k, stats, removed, [u], "co:remove-or-connect", nout, mu
            )
            if res is not None:
                return res
            s2 = s | {u}
            if _cx_ok(g, s2, d):
                _log(
                    stats,
                    "co:remove-or-connect",
                    "branch",
                    nout,
                    nout - 1,
                    mu,
                    _mu(g, s2, k),
                )
                sub = _dcx(g, s2, d, k, stats)
                if sub is not None:
                    return frozenset(removed) | sub
            return None

        u = next((x for x in outside if not _cx_ok(g, s | {x}, d)), None)
        if u is not None:
            g = g.delete_vertex(u)
            removed.add(u)
            k -= 1
            _log(
                stats,
                "cy:direct-obstruction",
                "reduce",
                nout,
                nout - 1,
                mu,
                _mu(g, s, k),
            )
            continue

        h = g.delete_vertices(s)
        bd = block_decomposition(h)
        redset = {x for x in outside if g.neighbors_in(x, s)}

        # two chain-linked attached vertices seeing different seed
        # components: delete one, or absorb both with the chain between them
        hit = None
        for block in bd.blocks:
            rb = sorted(x for x in block if x in redset)
            if len(rb) < 2:
                continue
            for i, a in enumerate(rb):
                ca = comp_of[g.neighbors_in(a, s)[0]]
                for b in rb[i + 1 :]:
                    cb = comp_of[g.neighbors_in(b, s)[0]]
                    if ca == cb:
                        continue
                    chain = _chain_between(g, h, block, a, b)
                    if chain is not None:
                        hit = (a, b, chain)
                        break
                if hit:
                    break
            if hit:
                break
        if hit:
            a, b, chain = hit
            res = _try_deletions(
                _dcx,
                g,
                s,
                d,
                k,
                stats,
                removed,
                [a, b],
                "cy:remove-or-connect2",
                nout,
                mu,
            )
            if res is not None:
                return res
            s2 = s | {a, b} | set(chain)
            assert _cx_ok(g, s2, d)  # the chain bridges the components tree-like
            _log(
                stats,
                "cy:remove-or-connect2",
                "branch",
                nout,
                nout - 2 - len(chain),
                mu,
                _mu(g, s2, k),
            )
            sub = _dcx(g, s2, d, k, stats)
            return frozenset(removed) | sub if sub is not None else None

        if __debug__:
            for x in outside:
                assert len(g.neighbors_in(x, s)) <= 2

        # three mutually chain-linked attached vertices in one block
        trio = None
        for block in bd.blocks:
            rb = sorted(x for x in block if x in redset)
            if len(rb) < 3:
                continue
            for v in rb:
                partners = [
                    x
                    for x in rb
                    if x != v and _chain_between(g, h, block, v, x) is not None
                ]
                if len(partners) >= 2:
                    trio = sorted([v, partners[0], partners[1]])
                    break
            if trio:
                break
        if trio:
            return _try_deletions(
                _dcx, g, s, d, k, stats, removed, trio, "cy:3red", nout, mu
            )

        leaf_idx = bd.leaf_block_indices()

        # leaf edges whose attachment is forced
        fired = False
        for li in leaf_idx:
            block = bd.blocks[li]
            if len(block) != 2:
                continue
            pair_ = sorted(block)
            anchor = None
            for c in pair_:
                other = pair_[1] if c == pair_[0] else pair_[0]
                # only the pendant endpoint may be absorbed: both its edges
                # run through vertices that stay deletable, so an optimal
                # solution never needs the pendant itself
                if c in bd.cut_vertices:
                    continue
                if c not in redset or len(g.neighbors_in(c, s)) != 1:
                    continue
                other_ok = other in bd.cut_vertices or (
                    other in redset and len(g.neighbors_in(other, s)) == 1
                )
                if other_ok:
                    anchor = c
                    break
            if anchor is not None:
                s = s | {anchor}
                _log(
                    stats, "cy:leaf-edge1", "reduce", nout, nout - 1, mu, _mu(g, s, k)
                )
                assert _cx_ok(g, s, d)
                fired = True
                break
        if fired:
            continue

        for li in leaf_idx:
            block = bd.blocks[li]
            if len(block) != 2:
                continue
            pair_ = sorted(block)
            if not all(x in redset for x in pair_):
                continue
            heavy = [x for x in pair_ if len(g.neighbors_in(x, s)) == 2]
            if not heavy:
                continue
            a = heavy[0]
            b = pair_[1] if a == pair_[0] else pair_[0]
            return _try_deletions(
                _dcx, g, s, d, k, stats, removed, [a, b], "cy:leaf-edge2", nout, mu
            )

        if __debug__:
            for li in leaf_idx:
                block = bd.blocks[li]
                cuts = bd.cut_vertices_in(li)
                if len(block) == 2 and cuts:
                    (c,) = cuts
                    (other,) = block - cuts
                    assert c not in redset
                    assert other in redset and len(g.neighbors_in(other, s)) == 2
            assert not any(
                len(c) == 2 for c in h.components()
            )  # edge components all resolve above

        # a non-edge leaf block carries at most two attached vertices now;
        # with exactly two, one of them or the block's cut vertex must go
        found2 = None
        for li in leaf_idx:
            block = bd.blocks[li]
            if len(block) < 3:
                continue
            rb = sorted(x for x in block if x in redset)
            if len(rb) >= 2:
                assert len(rb) == 2
                cuts = bd.cut_vertices_in(li)
                cands = list(rb)
                for c in sorted(cuts):
                    if c not in rb:
                        cands.append(c)
                found2 = cands
                break
        if found2:
            return _try_deletions(
                _dcx, g, s, d, k, stats, removed, found2, "cy:2red", nout, mu
            )

        # leaf blocks with no useful interior
        fired = False
        for li in leaf_idx:
            block = bd.blocks[li]
            cuts = bd.cut_vertices_in(li)
            core = set(block) - cuts
            core_reds = core & redset
            if core and not core_reds:
                g = g.delete_vertices(core)
                _log(
                    stats,
                    "cy:cut-is-red",
                    "reduce",
                    nout,
                    nout - len(core),
                    mu,
                    _mu(g, s, k),
                )
                fired = True
                break
            if not cuts and len(core_reds) == 1:
                (r,) = core_reds
                doomed = core - {r}
                if doomed:
                    g = g.delete_vertices(doomed)
                    _log(
                        stats,
                        "cy:cut-is-red",
                        "reduce",
                        nout,
                        nout - len(doomed),
                        mu,
                        _mu(g, s, k),
                    )
                    fired = True
                    break
        if fired:
            continue

        fired = False
        for li in leaf_idx:
            block = bd.blocks[li]
            cuts = bd.cut_vertices_in(li)
            if len(block) < 3 or not cuts:
                continue
            core_reds = (set(block) - cuts) & redset
            if len(core_reds) == 1:
                (r,) = core_reds
                assert not (cuts & redset)
                if len(g.neighbors_in(r, s)) == 1:
                    s = s | {r}
                    _log(
                        stats, "cy:red-deg1", "reduce", nout, nout - 1, mu, _mu(g, s, k)
                    )
                    assert _cx_ok(g, s, d)
                    fired = True
                    break
        if fired:
            continue

        # from here on every leaf block holds exactly one attached vertex,
        # not a cut vertex, with exactly two seed neighbors in one component
        if __debug__:
            for li in leaf_idx:
                block = bd.blocks[li]
                rb = sorted(x for x in block if x in redset)
                assert len(rb) == 1
                (r,) = rb
                assert r not in bd.cut_vertices
                rn = g.neighbors_in(r, s)
                assert len(rn) == 2
                assert len({comp_of[y] for y in rn}) == 1

        res = _dcx_walks(g, h, s, d, k, stats, removed, comp_of, bd, redset, nout, mu)
        if res is not _NO_RULE:
            return res

        res = _dcx_tree(g, h, s, d, k, stats, removed, comp_of, bd, redset, nout, mu)
        if res is not _NO_RULE:
            return res

        # endgame: the outside has collapsed to isolated attached vertices
        if __debug__:
            for cmp_ in h.components():
                assert len(cmp_) == 1
                lone = min(cmp_)
                assert len(g.neighbors_in(lone, s)) == 2

        epair = None
        for i, a in enumerate(outside):
            for b in outside[i + 1 :]:
                if not _cx_ok(g, s | {a, b}, d):
                    epair = [a, b]
                    break
            if epair:
                break
        if epair:
            return _try_deletions(
                _dcx, g, s, d, k, stats, removed, epair, "cy:last-step", nout, mu
            )

        # pairwise compatible survivors are jointly compatible
        s2 = s | set(outside)
        assert _cx_ok(g, s2, d)
        _log(stats, "cy:absorb-rest", "reduce", nout, 0, mu, _mu(g, s2, k))
        s = s2


def _dcx_walks(
    g: Graph,
    h: Graph,
    s: frozenset[int],
    d: int,
    k: int,
    stats: CompressionStats | None,
    removed: set[int],
    comp_of: dict[int, int],
    bd,
    redset: set[int],
    nout: int,
    mu: int,
):
    """Walk from each leaf block through degree-two cut vertices.

    The walk crosses attachment-free blocks until it meets one holding an
    attached vertex chain-linked to the entering cut vertex; then one of the
    leaf's attached vertex, that vertex, or the cut must go — unless the two
    attachment points see different seed components, in which case absorbing
    the whole walked stretch is a fourth option.
    """
    for li in bd.leaf_block_indices():
        block1 = bd.blocks[li]
        cuts1 = bd.cut_vertices_in(li)
        if len(cuts1) != 1:
            continue
        (c1,) = cuts1
        v = min(x for x in block1 if x in redset)
        if len(bd.blocks_containing(c1)) != 2:
            continue
        walked = [li]
        c_prev = c1
        (cur,) = (bi for bi in bd.blocks_containing(c1) if bi != li)
        while True:
            bcur = bd.blocks[cur]
            assert c_prev not in redset
            rb = sorted(x for x in bcur if x in redset)
            if rb:
                wcands = [
                    x for x in rb if _chain_between(g, h, bcur, x, c_prev) is not None
                ]
                if not wcands:
                    break  # no chain-linked attachment here; give up this walk
                w = wcands[0]
                vcomp = comp_of[g.neighbors_in(v, s)[0]]
                wcomps = {comp_of[y] for y in g.neighbors_in(w, s)}
                cands = [v, w, c_prev]
                if vcomp in wcomps:
                    return _try_deletions(
                        _dcx,
                        g,
                        s,
                        d,
                        k,
                        stats,
                        removed,
                        cands,
                        "cy:path-cut-tree",
                        nout,
                        mu,
                    )
                res = _try_deletions(
                    _dcx,
                    g,
                    s,
                    d,
                    k,
                    stats,
                    removed,
                    cands,
                    "cy:path-cut-tree2",
                    nout,
                    mu,
                )
                if res is not None:
                    return res
                chain = _chain_between(g, h, bcur, w, c_prev)
                absorb = set().union(*(bd.blocks[i] for i in walked))
                absorb |= set(chain) | {w}
                s2 = s | absorb
                if _cx_ok(g, s2, d):
                    assert len(g.induced(s2).components()) < len(
                        g.induced(s).components()
                    )
                    _log(
                        stats,
                        "cy:path-cut-tree2",
                        "branch",
                        nout,
                        nout - len(absorb),
                        mu,
                        _mu(g, s2, k),
                    )
                    sub = _dcx(g, s2, d, k, stats)
                    if sub is not None:
                        return frozenset(removed) | sub
                return None
            cuts_cur = bd.cut_vertices_in(cur)
            others = sorted(cuts_cur - {c_prev})
            if len(others) != 1:
                break
            c_next = others[0]
            if len(bd.blocks_containing(c_next)) != 2:
                break
            walked.append(cur)
            (cur,) = (bi for bi in bd.blocks_containing(c_next) if bi != cur)
            c_prev = c_next
    return _NO_RULE


def _dcx_tree(
    g: Graph,
    h: Graph,
    s: frozenset[int],
    d: int,
    k: int,
    stats: CompressionStats | None,
    removed: set[int],
    comp_of: dict[int, int],
    bd,
    redset: set[int],
    nout: int,
    mu: int,
):
    """Resolve a deepest junction of the block forest.

    After smoothing away degree-two nodes, the parent of a deepest leaf has
    only deepest leaf blocks below it.  Two of them that hang off chain-
    linked cut vertices (or off the junction cut itself) give a branching
    rule; when their attachment points see different seed components there
    is an extra child absorbing both hanging stretches.
    """
    adj: dict[tuple, list] = {}
    for bi, cv in bd.block_tree:
        adj.setdefault(("b", bi), []).append(("c", cv))
        adj.setdefault(("c", cv), []).append(("b", bi))
    for bi in range(len(bd.blocks)):
        adj.setdefault(("b", bi), [])
    def keyf(n: tuple) -> tuple:
        return _node_key(n, bd.blocks)

    for n in adj:
        adj[n].sort(key=keyf)

    seen: set[tuple] = set()
    comps: list[list[tuple]] = []
    for start in sorted(adj, key=keyf):
        if start in seen:
            continue
        queue, members = [start], []
        seen.add(start)
        while queue:
            cur = queue.pop(0)
            members.append(cur)
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        comps.append(members)

    for members in comps:
        nonleaf = [n for n in members if len(adj[n]) >= 2]
        if not nonleaf:
            continue
        root = min(nonleaf, key=keyf)

        parent: dict[tuple, tuple | None] = {root: None}
        order = [root]
        qi = 0
        while qi < len(order):
            cur = order[qi]
            qi += 1
            for nb in adj[cur]:
                if nb not in parent:
                    parent[nb] = cur
                    order.append(nb)

        tnodes = {n for n in members if len(adj[n]) != 2 or n == root}
        tparent: dict[tuple, tuple] = {}
        tpath: dict[tuple, list[tuple]] = {}
        tchildren: dict[tuple, list[tuple]] = {n: [] for n in tnodes}
        tdepth: dict[tuple, int] = {root: 0}
        for n in order:
            if n == root or n not in tnodes:
                continue
            path = [n]
            up = parent[n]
            while up not in tnodes:
                path.append(up)
                up = parent[up]
            tparent[n] = up
            tpath[n] = list(reversed(path))
            tchildren[up].append(n)
        for n in order:
            if n in tnodes and n != root:
                tdepth[n] = tdepth[tparent[n]] + 1
        for n in tchildren:
            tchildren[n].sort(key=keyf)

        tleaves = [n for n in tnodes if n != root and not tchildren[n]]
        if not tleaves:
            continue
        deepest = max(tdepth[n] for n in tleaves)
        leaf = min((n for n in tleaves if tdepth[n] == deepest), key=keyf)
        p = tparent[leaf]
        children = tchildren[p]
        assert all(not tchildren[c] for c in children)
        assert all(c[0] == "b" for c in children)

        def _hang(child: tuple) -> tuple[int, list[frozenset[int]]]:
            """Attached vertex of the hanging leaf and the stretch's blocks."""
            path = tpath[child]
            blocks = [bd.blocks[n[1]] for n in path if n[0] == "b"]
            bl = bd.blocks[child[1]]
            r = min(x for x in bl if x in redset)
            return r, blocks

        if p[0] == "b":
            cblock = bd.blocks[p[1]]
            entry = {c: tpath[c][0] for c in children}
            assert all(node[0] == "c" for node in entry.values())
            assert len({entry[c][1] for c in children}) == len(children)
            for i, ca in enumerate(children):
                for cb in children[i + 1 :]:
                    x, y = entry[ca][1], entry[cb][1]
                    chain = _chain_between(g, h, cblock, x, y)
                    if chain is None:
                        continue
                    v, blocks_a = _hang(ca)
                    w, blocks_b = _hang(cb)
                    cands = [v, w, x, y]
                    vcomp = comp_of[g.neighbors_in(v, s)[0]]
                    wcomp = comp_of[g.neighbors_in(w, s)[0]]
                    if vcomp == wcomp:
                        return _try_deletions(
                            _dcx,
                            g,
                            s,
                            d,
                            k,
                            stats,
                            removed,
                            cands,
                            "cy:branch-cut-tree",
                            nout,
                            mu,
                        )
                    res = _try_deletions(
                        _dcx,
                        g,
                        s,
                        d,
                        k,
                        stats,
                        removed,
                        cands,
                        "cy:branch-cut-tree2",
                        nout,
                        mu,
                    )
                    if res is not None:
                        return res
                    absorb = {x, y} | set(chain)
                    for bl in blocks_a + blocks_b:
                        absorb |= bl
                    s2 = s | absorb
                    if _cx_ok(g, s2, d):
                        assert len(g.induced(s2).components()) < len(
                            g.induced(s).components()
                        )
                        _log(
                            stats,
                            "cy:branch-cut-tree2",
                            "branch",
                            nout,
                            nout - len(absorb),
                            mu,
                            _mu(g, s2, k),
                        )
                        sub = _dcx(g, s2, d, k, stats)
                        if sub is not None:
                            return frozenset(removed) | sub
                    return None
        else:
            pv = p[1]
            assert len(children) >= 2
            ca, cb = children[0], children[1]
            v, blocks_a = _hang(ca)
            w, blocks_b = _hang(cb)
            cands = [v, w, pv]
            vcomp = comp_of[g.neighbors_in(v, s)[0]]
            wcomp = comp_of[g.neighbors_in(w, s)[0]]
            if vcomp == wcomp:
                return _try_deletions(
                    _dcx,
                    g,
                    s,
                    d,
                    k,
                    stats,
                    removed,
                    cands,
                    "cy:branch-cut-tree",
                    nout,
                    mu,
                )
            res = _try_deletions(
                _dcx,
                g,
                s,
                d,
                k,
                stats,
                removed,
                cands,
                "cy:branch-cut-tree2",
                nout,
                mu,
            )
            if res is not None:
                return res
            absorb: set[int] = set()
            for bl in blocks_a + blocks_b:
                absorb |= bl
            s2 = s | absorb
            if _cx_ok(g, s2, d):
                assert len(g.induced(s2).components()) < len(
                    g.induced(s).components()
                )
                _log(
                    stats,
                    "cy:branch-cut-tree2",
                    "branch",
                    nout,
                    nout - len(absorb),
                    mu,
                    _mu(g, s2, k),
                )
                sub = _dcx(g, s2, d, k, stats)
                if sub is not None:
                    return frozenset(removed) | sub
            return None
    return _NO_RULE
