"""Weighted directed interaction networks: consensus communities, PageRank and
structural metrics, backed by a C++ core."""

from ._core import (
    Graph,
    average_path_length,
    build_graph,
    clustering_coefficient,
    consensus,
    ego_network,
    giant_component,
    gini,
    in_degree_centralization,
    in_degree_distribution,
    induced_subgraph,
    k_core,
    lorenz,
    louvain,
    modularity,
    pagerank,
    parse_log,
)

__all__ = [
    "Graph",
    "average_path_length",
    "build_graph",
    "clustering_coefficient",
    "consensus",
    "ego_network",
    "giant_component",
    "gini",
    "in_degree_centralization",
    "in_degree_distribution",
    "induced_subgraph",
    "k_core",
    "lorenz",
    "louvain",
    "modularity",
    "pagerank",
    "parse_log",
]

__version__ = "0.1.0"
