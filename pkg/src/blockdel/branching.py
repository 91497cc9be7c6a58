"""Bounded search tree solver for the general deletion problem.

The driver is obstruction-guided: while the graph has an obstruction, some
vertex of it must be deleted, so we branch over its at most 2d-2 vertices;
once the graph is obstruction-free we cluster it, reduce to subset feedback
vertex set, solve that exactly, and lift.  Degenerate classes and d = 1
admit no edges at all, which is plain vertex cover and gets its own
two-way branching.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, PClassSpec, is_in_phi
from .obstructions import clusters, find_obstruction
from .sfvs import build_sfvs_instance, lift_solution, solve_sfvs


@dataclass(frozen=True)
class Instance:
    """One problem instance: delete <= k vertices so every block with an
    edge has <= d vertices and lies in the class."""

    graph: Graph
    pclass: PClassSpec
    d: int
    k: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        if self.k < 0:
            raise ValueError("k must be non-negative")


@dataclass(frozen=True)
class Solution:
    """A deletion set plus search statistics."""

    deleted: frozenset[int]
    branch_nodes: int = 0
    leaves: int = 0


class _Stats:
    __slots__ = ("nodes", "leaves")

    def __init__(self) -> None:
        self.nodes = 0
        self.leaves = 0


def _key(s: frozenset[int]) -> tuple[int, tuple[int, ...]]:
    return (len(s), tuple(sorted(s)))


def solve(inst: Instance) -> Solution | None:
    """Minimum-size deletion set of size <= k, or None when infeasible.

    Deterministic: branch vertices ascending, candidates compared by
    (size, sorted vertices).
    """
    best, stats = _solve_counted(inst)
    if best is None:
        return None
    return Solution(best, stats.nodes, stats.leaves)


def count_branch_nodes(inst: Instance) -> int:
    """Number of search-tree nodes ``solve`` explores on this instance."""
    return _solve_counted(inst)[1].nodes


def _solve_counted(inst: Instance) -> tuple[frozenset[int] | None, _Stats]:
    if inst.pclass.degenerate or inst.d == 1:
        return _vertex_cover(inst.graph, inst.k)
    return _obstruction_branch(inst.graph, inst.pclass, inst.d, inst.k)


def _obstruction_branch(
    g: Graph, p: PClassSpec, d: int, k: int
) -> tuple[frozenset[int] | None, _Stats]:
    stats = _Stats()
    best: frozenset[int] | None = None

    def rec(h: Graph, chosen: frozenset[int]) -> None:
        nonlocal best
        stats.nodes += 1
        witness = find_obstruction(h, p, d)
        if witness is None:
            stats.leaves += 1
            cs = clusters(h, p, d)
            sub = build_sfvs_instance(h, cs, k - len(chosen))
            s_prime = solve_sfvs(sub)
            if s_prime is None:
                return
            lifted = lift_solution(sub, s_prime)
            assert is_in_phi(h.delete_vertices(lifted), p, d)
            cand = chosen | lifted
            if best is None or _key(cand) < _key(best):
                best = cand
            return
        limit = k if best is None else min(k, len(best))
        if len(chosen) + 1 > limit:
            stats.leaves += 1  # dead end: no budget to hit the witness
            return
        for v in sorted(witness.vertex_set):
            rec(h.delete_vertex(v), chosen | {v})

    rec(g, frozenset())
    return best, stats


def _vertex_cover(g: Graph, k: int) -> tuple[frozenset[int] | None, _Stats]:
    """No edge may survive: classic two-way branching on a remaining edge."""
    stats = _Stats()
    best: frozenset[int] | None = None

    def first_edge(h: Graph) -> tuple[int, int] | None:
        for u in h.vertices:
            ns = h.neighbors(u)
            if ns:
                return (u, ns[0])
        return None

    def rec(h: Graph, chosen: frozenset[int]) -> None:
        nonlocal best
        stats.nodes += 1
        edge = first_edge(h)
        if edge is None:
            stats.leaves += 1
            if best is None or _key(chosen) < _key(best):
                best = chosen
            return
        limit = k if best is None else min(k, len(best))
        if len(chosen) + 1 > limit:
            stats.leaves += 1
            return
        for v in edge:
            rec(h.delete_vertex(v), chosen | {v})

    rec(g, frozenset())
    return best, stats
