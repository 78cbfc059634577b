"""``mosp-bench`` command line.

Exit codes: 0 success, 1 usage error, 2 verification mismatch, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace

from ..graph import GraphError
from ..instance_io import FormatError
from ..oracle import DEFAULT_MAX_NODES, OracleGuardError
from .commands import ORACLE_COLUMNS, RunFailure, cmd_gen, cmd_oracle, cmd_run, cmd_stats
from .manifest import SUITES, ManifestError, load_manifest, suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for mismatches here
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _split(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mosp-bench", description="Generate, run and analyse MOSP benchmark suites.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add_manifest_args(sp, out_help):
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--manifest", help="JSON manifest")
        src.add_argument("--suite", choices=SUITES, metavar="NAME", help="built-in suite: " + ", ".join(SUITES))
        sp.add_argument("--out", help=out_help)
        sp.add_argument("--seed", type=int, help="seed for random query draws (overrides the manifest)")

    g = sub.add_parser("gen", help="write instance files for a manifest or suite")
    add_manifest_args(g, "output directory")
    g.add_argument("--list-suites", action="store_true", help="print the built-in suite names and exit")

    r = sub.add_parser("run", help="run the algorithm matrix and write CSV")
    add_manifest_args(r, "CSV path (default: stdout)")
    r.add_argument("--jobs", type=int, default=1, help="worker processes (1 = sequential, for clean timing)")
    r.add_argument("--time-limit", type=float, help="seconds per solver run")
    r.add_argument("--measure-obsolete", action="store_true", default=None, help="count obsolete touches")
    r.add_argument("--algos", help="comma list from LS,LS-TD,NS,NS-TD")
    r.add_argument("--queue-policy", help="fifo, lexdeque or a comma list of both (LS only)")
    r.add_argument("--reps", type=int, help="repetitions per run")

    s = sub.add_parser("stats", help="summaries and paired Wilcoxon tests from a run CSV")
    s.add_argument("csv", help="CSV written by 'run'")
    s.add_argument("--compare", action="append", default=[], metavar="A:B",
                   help="paired comparison, e.g. NS-TD:NS or NS:LS@lexdeque (repeatable)")
    s.add_argument("--metric", default="wall_time")
    s.add_argument("--alternative", choices=["less", "greater", "two_sided"], default="less",
                   help="hypothesis on A - B (default: less, i.e. A is smaller)")
    s.add_argument("--group-by", default="algorithm,queue_policy")
    s.add_argument("--allow-unmatched", action="store_true", help="ignore keys present in only one arm")
    s.add_argument("--out", help="CSV path (default: stdout)")

    o = sub.add_parser("oracle", help="check every solver against brute-force enumeration")
    o.add_argument("graph", help="graph file in p mosp format")
    o.add_argument("queries", help="query file")
    o.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    o.add_argument("--out", help="CSV path (default: stdout)")
    return p


def _manifest(args):
    if args.manifest:
        m = load_manifest(args.manifest)
    elif args.suite:
        m = suite(args.suite)
    else:
        raise UsageError("one of --manifest or --suite is required")
    kw = {}
    if args.seed is not None:
        kw["seed"] = args.seed
    for attr, field in (("time_limit", "time_limit"), ("measure_obsolete", "measure_obsolete"), ("reps", "repetitions")):
        v = getattr(args, attr, None)
        if v is not None:
            kw[field] = v
    if getattr(args, "algos", None):
        kw["algorithms"] = _split(args.algos)
    if getattr(args, "queue_policy", None):
        kw["queue_policies"] = _split(args.queue_policy)
    return replace(m, **kw).validate()


def _print_csv(rows, columns):
    w = csv.DictWriter(sys.stdout, columns, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        if args.command == "gen":
            if args.list_suites:
                print("\n".join(SUITES))
                return EXIT_OK
            if not args.out:
                raise UsageError("gen needs --out <directory>")
            paths = cmd_gen(_manifest(args), args.out)
            print(f"wrote {len(paths)} instances to {args.out}", file=sys.stderr)
        elif args.command == "run":
            if args.jobs < 1:
                raise UsageError("--jobs must be at least 1")
            m = _manifest(args)
            out = args.out or m.output
            rows = cmd_run(m, out, jobs=args.jobs)
            if out is None:
                from .commands import RUN_COLUMNS
                _print_csv(rows, RUN_COLUMNS)
        elif args.command == "stats":
            from .commands import STATS_COLUMNS
            rows = cmd_stats(args.csv, args.compare, metric=args.metric, group_by=_split(args.group_by),
                             alternative=args.alternative, out=args.out, allow_unmatched=args.allow_unmatched)
            if args.out is None:
                _print_csv(rows, STATS_COLUMNS)
        elif args.command == "oracle":
            rows, ok = cmd_oracle(args.graph, args.queries, out=args.out, max_nodes=args.max_nodes)
            if args.out is None:
                _print_csv(rows, ORACLE_COLUMNS)
            for r in rows:
                if r["status"] == "FAIL":
                    print(f"MISMATCH query {r['query']} ({r['s']}->{r['t']}) {r['solver']}: "
                          f"missing [{r['missing']}] extra [{r['extra']}]", file=sys.stderr)
            return EXIT_OK if ok else EXIT_MISMATCH
    except (UsageError, ManifestError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError, GraphError, OracleGuardError, RunFailure, IndexError, ValueError) as exc:
        print(f"mosp-bench: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
