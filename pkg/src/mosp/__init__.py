"""Multiobjective shortest paths by label correction, with tree-deletion pruning."""
from .graph import Graph, GraphError, build_graph, out_arcs
from .labeling import (
    ParetoResult, RunMetrics, SolverOptions, SolveTimeout, VARIANTS,
    run_label_selection, run_node_selection, solve,
)

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphError", "build_graph", "out_arcs", "ParetoResult", "RunMetrics",
    "SolverOptions", "SolveTimeout", "VARIANTS", "run_label_selection", "run_node_selection", "solve",
]
