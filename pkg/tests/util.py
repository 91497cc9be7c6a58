"""Shared builders for the test suite: tiny named graphs and random corpora."""

from __future__ import annotations

import random

from blockdel.graphs import Graph


def path_graph(n: int) -> Graph:
    return Graph.from_edges(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs >= 3 vertices")
    return Graph.from_edges(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(range(n), [(u, v) for u in range(n) for v in range(u + 1, n)])


def diamond() -> Graph:
    """K4 minus one edge; vertices 0-3, missing edge 2-3."""
    return Graph.from_edges(range(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])


def bowtie() -> Graph:
    """Two triangles sharing vertex 0."""
    return Graph.from_edges(range(5), [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def triangle_chain(length: int) -> Graph:
    """``length`` triangles glued in a path at shared cut vertices."""
    edges = []
    for i in range(length):
        a, b, c = 2 * i, 2 * i + 1, 2 * i + 2
        edges += [(a, b), (b, c), (a, c)]
    return Graph.from_edges(range(2 * length + 1), edges)


def random_edge_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(range(n), edges)
