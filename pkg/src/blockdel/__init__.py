"""Exact, approximate, and kernelization-based solvers for bounded block
vertex deletion: delete at most k vertices so that every remaining block has
at most d vertices and lies in a chosen block-hereditary class."""

from .graphs import (
    ALL_BICONNECTED,
    CLIQUES,
    CYCLES_AND_K2,
    BlockDecomposition,
    Graph,
    GraphFormatError,
    PClassSpec,
    block_decomposition,
    block_in_class,
    format_edge_list,
    is_in_phi,
    parse_edge_list,
)

__all__ = [
    "ALL_BICONNECTED",
    "CLIQUES",
    "CYCLES_AND_K2",
    "BlockDecomposition",
    "Graph",
    "GraphFormatError",
    "PClassSpec",
    "block_decomposition",
    "block_in_class",
    "format_edge_list",
    "is_in_phi",
    "parse_edge_list",
]

__version__ = "0.1.0"
