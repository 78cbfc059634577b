"""LS, LS-TD, NS and NS-TD entry points."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, fields
from typing import Literal

import numpy as np

from ..graph import Graph
from . import kernels as K

__all__ = [
    "SolverOptions", "ParetoResult", "RunMetrics", "SolveTimeout", "VARIANTS",
    "run_label_selection", "run_node_selection", "solve", "warmup",
]

Strategy = Literal["label_selection", "node_selection"]
QueuePolicy = Literal["fifo", "lex_front_back"]

QUEUE_POLICIES = ("fifo", "lex_front_back")
VARIANTS = ("LS", "LS-TD", "NS", "NS-TD")


class SolveTimeout(TimeoutError):
    def __init__(self, limit: float, metrics: RunMetrics):
        super().__init__(f"solver exceeded the time limit of {limit:g}s")
        self.metrics = metrics


@dataclass(frozen=True)
class SolverOptions:
    strategy: Strategy = "node_selection"
    tree_deletion: bool = False
    queue_policy: QueuePolicy = "fifo"
    measure_obsolete: bool = False
    time_limit: float | None = None

    def __post_init__(self):
        if self.strategy not in ("label_selection", "node_selection"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.queue_policy not in QUEUE_POLICIES:
            raise ValueError(f"unknown queue policy {self.queue_policy!r}")
        if self.queue_policy == "lex_front_back" and self.strategy != "label_selection":
            raise ValueError("lex_front_back applies to label selection only")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive")

    @classmethod
    def variant(cls, name: str, queue_policy: QueuePolicy = "fifo", **kw) -> SolverOptions:
        """Options for one of ``LS``, ``LS-TD``, ``NS``, ``NS-TD``."""
        if name not in VARIANTS:
            raise ValueError(f"unknown variant {name!r}; expected one of {', '.join(VARIANTS)}")
        strategy = "label_selection" if name.startswith("LS") else "node_selection"
        return cls(strategy=strategy, tree_deletion=name.endswith("-TD"), queue_policy=queue_policy, **kw)

    @property
    def name(self) -> str:
        base = "LS" if self.strategy == "label_selection" else "NS"
        return base + ("-TD" if self.tree_deletion else "")


@dataclass
class ParetoResult:
    """One ``(path, cost)`` pair per front point, sorted lexicographically by cost."""

    points: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    def costs(self) -> set[tuple[int, ...]]:
        return {c for _, c in self.points}

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class RunMetrics:
    """Counters for one run.

    ``labels_created`` includes the root; ``label_pushes`` counts only
    propagations along arcs.  ``queue_pops`` counts processed pops (LS skips
    over lazily deleted entries without counting them).  ``obsolete_touched``
    and ``obsolete_subtree`` are filled only by non-TD runs with measurement
    on.
    """

    wall_time: float = 0.0
    labels_created: int = 0
    labels_deleted: int = 0
    label_pushes: int = 0
    queue_pops: int = 0
    td_subtree_deleted: int = 0
    obsolete_touched: int = 0
    obsolete_subtree: int = 0
    front_size: int = 0

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def counters(self) -> dict[str, int]:
        return {k: v for k, v in self.__dict__.items() if k != "wall_time"}


def _check_endpoints(graph: Graph, s: int, t: int) -> None:
    for name, v in (("source", s), ("target", t)):
        if not 0 <= v < graph.node_count:
            raise IndexError(f"{name} node {v} out of range [0, {graph.node_count})")


def _metrics(state, front_size: int, wall: float) -> RunMetrics:
    c = state.ctr
    return RunMetrics(
        wall_time=wall,
        labels_created=int(c[K.CREATED]),
        labels_deleted=int(c[K.DELETED_CT]),
        label_pushes=int(c[K.PUSHES]),
        queue_pops=int(c[K.POPS]),
        td_subtree_deleted=int(c[K.TD_DELETED]),
        obsolete_touched=int(c[K.OBS_TOUCHED]),
        obsolete_subtree=int(c[K.OBS_SUBTREE]),
        front_size=front_size,
    )


def _finish(state, t: int) -> ParetoResult:
    ids, paths, lengths = K.collect(state, t)
    ends = np.cumsum(lengths)
    points = []
    lo = 0
    for l, hi in zip(ids.tolist(), ends.tolist()):
        points.append((tuple(paths[lo:hi].tolist()), tuple(state.cost[l].tolist())))
        lo = hi
    points.sort(key=lambda p: p[1])
    return ParetoResult(points)


def _run(graph: Graph, s: int, t: int, opts: SolverOptions, *, return_arena: bool = False):
    _check_endpoints(graph, s, t)
    if graph.dimension < 1:
        raise ValueError("graph dimension must be positive")
    state = K.new_state(graph.node_count, graph.dimension, label_cap=max(1024, 4 * graph.node_count))
    limit = float(opts.time_limit or 0.0)
    measure = opts.measure_obsolete and not opts.tree_deletion
    start = time.perf_counter_ns()
    if opts.strategy == "label_selection":
        state, status = K.label_selection(
            graph.offsets, graph.heads, graph.costs, s,
            opts.tree_deletion, opts.queue_policy == "lex_front_back", measure, limit, state,
        )
    else:
        state, status = K.node_selection(
            graph.offsets, graph.heads, graph.costs, s,
            opts.tree_deletion, measure, limit, state,
        )
    if status == K.STATUS_OVERFLOW:
        raise OverflowError("cost vector overflow: path costs exceed the 64-bit range")
    if status == K.STATUS_TIMEOUT:
        wall = (time.perf_counter_ns() - start) / 1e9
        raise SolveTimeout(limit, _metrics(state, 0, wall))
    result = _finish(state, t)
    wall = (time.perf_counter_ns() - start) / 1e9
    metrics = _metrics(state, len(result.points), wall)
    if return_arena:
        from .arena import LabelArena
        return result, metrics, LabelArena.from_state(state)
    return result, metrics


def run_label_selection(graph: Graph, s: int, t: int, opts: SolverOptions | None = None):
    """Pareto front of ``s``-``t`` paths by FIFO label selection.

    Returns ``(ParetoResult, RunMetrics)``; an unreachable target gives an
    empty front.
    """
    opts = opts or SolverOptions(strategy="label_selection")
    if opts.strategy != "label_selection":
        raise ValueError("run_label_selection needs strategy='label_selection'")
    return _run(graph, s, t, opts)


def run_node_selection(graph: Graph, s: int, t: int, opts: SolverOptions | None = None):
    """Pareto front of ``s``-``t`` paths by FIFO node selection."""
    opts = opts or SolverOptions(strategy="node_selection")
    if opts.strategy != "node_selection":
        raise ValueError("run_node_selection needs strategy='node_selection'")
    return _run(graph, s, t, opts)


def solve(graph: Graph, s: int, t: int, opts: SolverOptions | str = "NS"):
    if isinstance(opts, str):
        opts = SolverOptions.variant(opts)
    return _run(graph, s, t, opts)


_warm = False


def warmup() -> None:
    """Load or compile every kernel specialization so later timings exclude JIT cost."""
    global _warm
    if _warm:
        return
    from ..graph import build_graph
    g = build_graph(3, [(0, 1, (1, 2)), (1, 2, (1, 1)), (0, 2, (3, 3)), (2, 0, (1, 1))])
    for name in VARIANTS:
        for policy in QUEUE_POLICIES if name.startswith("LS") else ("fifo",):
            for measure in (False, True):
                _run(g, 0, 2, SolverOptions.variant(name, policy, measure_obsolete=measure, time_limit=60.0))
                _run(g, 0, 2, SolverOptions.variant(name, policy, measure_obsolete=measure))
    _warm = True
