"""Label-correcting MOSP solvers (LS, LS-TD, NS, NS-TD) and their arena primitives."""
from .arena import (
    LabelArena, clean, dominates, measure_obsolete, push_label, reconstruct_path, tree_delete,
)
from .solvers import (
    QUEUE_POLICIES, VARIANTS, ParetoResult, RunMetrics, SolverOptions, SolveTimeout,
    run_label_selection, run_node_selection, solve, warmup,
)

__all__ = [
    "LabelArena", "clean", "dominates", "measure_obsolete", "push_label", "reconstruct_path",
    "tree_delete", "QUEUE_POLICIES", "VARIANTS", "ParetoResult", "RunMetrics", "SolverOptions",
    "SolveTimeout", "run_label_selection", "run_node_selection", "solve", "warmup",
]
