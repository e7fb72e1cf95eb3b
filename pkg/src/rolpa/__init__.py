"""Role-based label propagation (roLPA) with LPA/LPAD baselines, role metrics,
partition quality measures, synthetic benchmarks and plain-text I/O."""

from .generators import GnSpec, gn_benchmark, ring_of_cliques
from .graph import Graph, GraphError, Partition, build_graph, largest_component, singleton_partition
from .io import FormatError, read_edge_list, read_lfr, read_partition, write_edge_list, write_partition
from .propagation import (RunConfig, RunResult, TieRule, Variant, detect, lpa_detect, lpad_detect,
                          rolpa_detect, run_batch)
from .quality import modularity, nmi, random_partition_like, rnmi, rrnmi
from .roles import burt_constraint, community_density, constraint_order, node_centrality, node_loyalty

__version__ = "0.1.0"

__all__ = [
    "GnSpec", "gn_benchmark", "ring_of_cliques",
    "Graph", "GraphError", "Partition", "build_graph", "largest_component", "singleton_partition",
    "FormatError", "read_edge_list", "read_lfr", "read_partition", "write_edge_list", "write_partition",
    "RunConfig", "RunResult", "TieRule", "Variant", "detect", "lpa_detect", "lpad_detect",
    "rolpa_detect", "run_batch",
    "modularity", "nmi", "random_partition_like", "rnmi", "rrnmi",
    "burt_constraint", "community_density", "constraint_order", "node_centrality", "node_loyalty",
]
