"""Benchmark command line: ``mosp-bench gen|run|stats|oracle``."""
from .commands import RUN_COLUMNS, cmd_gen, cmd_oracle, cmd_run, cmd_stats, default_solvers, load_instance
from .main import main
from .manifest import SUITES, Manifest, ManifestError, load_manifest, suite

__all__ = [
    "RUN_COLUMNS", "cmd_gen", "cmd_oracle", "cmd_run", "cmd_stats", "default_solvers", "load_instance",
    "main", "SUITES", "Manifest", "ManifestError", "load_manifest", "suite",
]
