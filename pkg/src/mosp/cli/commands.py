"""Implementations of the ``gen``, ``run``, ``stats`` and ``oracle`` subcommands."""
from __future__ import annotations

import csv
import json
import os
import statistics
import sys
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ..generators import generate
from ..graph import Graph
from ..instance_io import QuerySet, random_queries, read_graph, read_queries, write_graph, write_queries
from ..labeling.solvers import ParetoResult, RunMetrics, SolverOptions, SolveTimeout, VARIANTS, solve, warmup
from ..oracle import DEFAULT_MAX_NODES, brute_force_front
from ..stats import summarize, wilcoxon_signed_rank
from .manifest import InstanceEntry, Manifest, ManifestError, POLICY_NAMES, QuerySource, policy_internal

__all__ = [
    "RUN_COLUMNS", "RunFailure", "VerificationMismatch", "cmd_gen", "cmd_run", "cmd_stats",
    "cmd_oracle", "load_instance", "default_solvers",
]

KEY_COLUMNS = ["instance", "n", "m", "d", "query", "s", "t", "algorithm", "queue_policy", "repetition", "status"]
RUN_COLUMNS = KEY_COLUMNS + RunMetrics.field_names()


class RunFailure(RuntimeError):
    """Every configured run failed, or inputs could not be used."""


class VerificationMismatch(RuntimeError):
    pass


# -- instances ------------------------------------------------------------------

def _queries_for(entry: InstanceEntry, graph: Graph, designated: tuple[int, int] | None, seed: int) -> QuerySet:
    q = entry.queries
    if q.kind == "designated":
        return QuerySet([designated])
    if q.kind == "file":
        qs = read_queries(q.path)
    else:
        qs = random_queries(graph.node_count, q.count, seed if q.seed is None else q.seed)
    qs.validate(graph)
    return qs


def load_instance(entry: InstanceEntry, seed: int = 0) -> tuple[Graph, QuerySet]:
    if entry.spec is not None:
        inst = generate(entry.spec)
        return inst.graph, _queries_for(entry, inst.graph, (inst.source, inst.target), seed)
    graph = read_graph(entry.path)
    return graph, _queries_for(entry, graph, None, seed)


def cmd_gen(manifest: Manifest, out_dir: str | os.PathLike) -> list[Path]:
    """Write each generated instance as ``<name>.mosp`` + ``<name>.queries`` and echo a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    echo = []
    for entry in manifest.instances:
        graph, queries = load_instance(entry, manifest.seed)
        name = entry.name
        gpath = out / f"{name}.mosp"
        qpath = out / f"{name}.queries"
        comments = []
        if entry.spec is not None:
            comments.append("spec " + json.dumps(entry.spec.to_dict(), sort_keys=True))
        else:
            comments.append(f"copied from {entry.path}")
        write_graph(graph, gpath, comments=comments)
        write_queries(queries, qpath)
        written.append(gpath)
        echo.append({"path": gpath.name, "queries": {"file": qpath.name}})
    m = manifest.to_json()
    m["instances"] = echo
    m["generated_from"] = [e.to_json() for e in manifest.instances]
    (out / "manifest.json").write_text(json.dumps(m, indent=2) + "\n", encoding="utf-8")
    return written


# -- run --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Task:
    instance: int
    query: int
    s: int
    t: int
    algorithm: str
    policy: str
    repetition: int


_worker_entries: list[InstanceEntry] = []
_worker_seed = 0


def _worker_init(entries: list[InstanceEntry], seed: int) -> None:
    global _worker_entries, _worker_seed
    _worker_entries = entries
    _worker_seed = seed
    warmup()


@lru_cache(maxsize=2)
def _worker_graph(i: int) -> Graph:
    return load_instance(_worker_entries[i], _worker_seed)[0]


def _execute(task: _Task, time_limit: float, measure: bool) -> tuple[str, RunMetrics | None, str]:
    graph = _worker_graph(task.instance)
    opts = SolverOptions.variant(
        task.algorithm, policy_internal(task.policy), measure_obsolete=measure, time_limit=time_limit,
    )
    try:
        _, metrics = solve(graph, task.s, task.t, opts)
    except SolveTimeout:
        return "timeout", None, ""
    except (OverflowError, MemoryError, ValueError, IndexError) as exc:
        return "error", None, f"{type(exc).__name__}: {exc}"
    return "ok", metrics, ""


def _execute_packed(args):
    return _execute(*args)


def _format(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cmd_run(
    manifest: Manifest,
    out: str | os.PathLike | None = None,
    jobs: int = 1,
    log: Callable[[str], None] | None = None,
) -> list[dict]:
    """Run the algorithm matrix; rows are returned and, with ``out``, written as CSV in task order."""
    global _worker_entries, _worker_seed
    manifest.validate()
    log = log or (lambda msg: print(msg, file=sys.stderr))
    tasks: list[_Task] = []
    info = []
    for i, entry in enumerate(manifest.instances):
        graph, queries = load_instance(entry, manifest.seed)
        info.append((entry.name, graph.node_count, graph.arc_count, graph.dimension))
        for qi, (s, t) in enumerate(queries):
            # repetitions outermost: slow spells of the machine then hit every arm alike
            for rep in range(manifest.repetitions):
                for algo, policy in manifest.matrix():
                    tasks.append(_Task(i, qi, s, t, algo, policy, rep))

    args = [(task, manifest.time_limit, manifest.measure_obsolete) for task in tasks]
    if jobs <= 1:
        _worker_init(manifest.instances, manifest.seed)
        _worker_graph.cache_clear()
        results: Iterator = map(_execute_packed, args)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init,
                                   initargs=(manifest.instances, manifest.seed))
        results = pool.map(_execute_packed, args, chunksize=1)

    rows = []
    fh = writer = None
    if out is not None:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        fh = open(out, "w", newline="", encoding="utf-8")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
    failures = 0
    try:
        for task, (status, metrics, err) in zip(tasks, results):
            name, n, m, d = info[task.instance]
            row = {
                "instance": name, "n": n, "m": m, "d": d, "query": task.query, "s": task.s, "t": task.t,
                "algorithm": task.algorithm, "queue_policy": task.policy, "repetition": task.repetition,
                "status": status,
            }
            for f in RunMetrics.field_names():
                row[f] = getattr(metrics, f) if metrics is not None else ""
            if status != "ok":
                failures += 1
                log(f"{name} q{task.query} {task.algorithm}/{task.policy} rep{task.repetition}: {status} {err}".rstrip())
            rows.append(row)
            if writer is not None:
                writer.writerow([_format(row[c]) for c in RUN_COLUMNS])
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
        if pool is not None:
            pool.shutdown()
    if tasks and failures == len(tasks):
        raise RunFailure(f"all {len(tasks)} configured runs failed")
    return rows


# -- stats ---------------------------------------------------------------------------

def read_run_csv(path: str | os.PathLike) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(KEY_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise RunFailure(f"{path}: not a run CSV (missing {', '.join(sorted(missing))})")
        return list(reader)


def _arm(spec: str) -> tuple[str, str]:
    algo, _, policy = spec.partition("@")
    if algo not in VARIANTS:
        raise ManifestError(f"unknown algorithm {algo!r} in comparison")
    policy = policy or "fifo"
    policy_internal(policy)
    return algo, policy


STATS_COLUMNS = [
    "kind", "group", "metric", "count", "min", "q1", "median", "q3", "max", "mean",
    "a", "b", "n_pairs", "n_effective", "w_plus", "p_value", "alternative", "method",
    "median_a", "median_b", "median_ratio",
]


def cmd_stats(
    rows: Iterable[dict] | str | os.PathLike,
    comparisons: Iterable[str] = (),
    metric: str = "wall_time",
    group_by: Iterable[str] = ("algorithm", "queue_policy"),
    alternative: str = "less",
    out: str | os.PathLike | None = None,
    allow_unmatched: bool = False,
) -> list[dict]:
    """Summaries per group and paired Wilcoxon tests per ``A:B`` comparison.

    An arm is ``ALGO`` or ``ALGO@policy``.  Each (instance, query) key
    contributes the median of its successful repetitions.  ``alternative``
    refers to ``A - B``; the default ``less`` asks whether A is smaller
    (faster, for runtimes).
    """
    if isinstance(rows, (str, os.PathLike)):
        rows = read_run_csv(rows)
    rows = [r for r in rows if r["status"] == "ok"]
    group_by = list(group_by)
    out_rows: list[dict] = []

    groups: dict[tuple, list[float]] = defaultdict(list)
    for r in rows:
        if metric not in r:
            raise RunFailure(f"unknown metric column {metric!r}")
        groups[tuple(str(r[g]) for g in group_by)].append(float(r[metric]))
    if not groups:
        raise RunFailure("no successful runs to summarize")
    for key in sorted(groups):
        s = summarize(groups[key])
        out_rows.append({"kind": "summary", "group": "/".join(key), "metric": metric, **s.as_dict()})

    per_arm: dict[tuple[str, str], dict[tuple, list[float]]] = defaultdict(lambda: defaultdict(list))
    for r in rows:
        per_arm[(r["algorithm"], r["queue_policy"])][(r["instance"], str(r["query"]))].append(float(r[metric]))

    for comp in comparisons:
        a_spec, sep, b_spec = comp.partition(":")
        if not sep:
            raise ManifestError(f"comparison {comp!r} must look like A:B")
        a, b = _arm(a_spec), _arm(b_spec)
        xa, xb = per_arm.get(a, {}), per_arm.get(b, {})
        keys = sorted(set(xa) & set(xb))
        unmatched = set(xa) ^ set(xb)
        if not keys:
            raise RunFailure(f"comparison {comp}: no matched (instance, query) pairs")
        if unmatched and not allow_unmatched:
            raise RunFailure(f"comparison {comp}: {len(unmatched)} (instance, query) keys lack a partner")
        x = [statistics.median(xa[k]) for k in keys]
        y = [statistics.median(xb[k]) for k in keys]
        med_a, med_b = statistics.median(x), statistics.median(y)
        try:
            w = wilcoxon_signed_rank(x, y, alternative)
            wd = w.as_dict()
        except ValueError:
            # every pair tied: no evidence either way
            wd = {"n_effective": 0, "w_plus": 0.0, "p_value": 1.0, "alternative": alternative, "method": "exact"}
        out_rows.append({
            "kind": "wilcoxon", "metric": metric, "a": a_spec, "b": b_spec, "n_pairs": len(keys), **wd,
            "median_a": med_a, "median_b": med_b,
            "median_ratio": (med_b / med_a) if med_a else "",
        })

    if out is not None:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, STATS_COLUMNS, lineterminator="\n")
            w.writeheader()
            for r in out_rows:
                w.writerow({k: _format(r.get(k, "")) for k in STATS_COLUMNS})
    return out_rows


# -- oracle --------------------------------------------------------------------------

Solver = Callable[[Graph, int, int], ParetoResult]


def default_solvers() -> dict[str, Solver]:
    out: dict[str, Solver] = {}
    for v in VARIANTS:
        for policy in (POLICY_NAMES if v.startswith("LS") else ["fifo"]):
            opts = SolverOptions.variant(v, policy_internal(policy))
            out[f"{v}@{policy}"] = lambda g, s, t, o=opts: solve(g, s, t, o)[0]
    return out


def _fmt_vectors(vs) -> str:
    return "|".join(";".join(map(str, v)) for v in sorted(vs))


ORACLE_COLUMNS = ["query", "s", "t", "solver", "status", "front_size", "vectors", "missing", "extra"]


def cmd_oracle(
    graph: Graph | str | os.PathLike,
    queries: QuerySet | str | os.PathLike,
    out: str | os.PathLike | None = None,
    solvers: Mapping[str, Solver] | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> tuple[list[dict], bool]:
    """Compare every solver's front with the brute-force front; returns ``(rows, all_passed)``."""
    if not isinstance(graph, Graph):
        graph = read_graph(graph)
    if not isinstance(queries, QuerySet):
        queries = read_queries(queries)
    queries.validate(graph)
    solvers = default_solvers() if solvers is None else solvers
    rows = []
    ok = True
    for qi, (s, t) in enumerate(queries):
        ref = brute_force_front(graph, s, t, max_nodes=max_nodes).costs()
        for name, fn in solvers.items():
            got = fn(graph, s, t).costs()
            passed = got == ref
            ok &= passed
            rows.append({
                "query": qi, "s": s, "t": t, "solver": name, "status": "PASS" if passed else "FAIL",
                "front_size": len(ref), "vectors": _fmt_vectors(ref),
                "missing": _fmt_vectors(ref - got), "extra": _fmt_vectors(got - ref),
            })
    if out is not None:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, ORACLE_COLUMNS, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return rows, ok
