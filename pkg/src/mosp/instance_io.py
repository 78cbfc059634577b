"""Line-oriented text format for graphs and query sets.

Graph files::

    c free-form comment
    p mosp <n> <m> <d>
    a <tail> <head> <c1> ... <cd>      (m lines, 0-based node indices)

Query files hold one ``q <s> <t>`` line per query.  Both readers skip
comment and blank lines and honour a ``c index-base 1`` directive, after
which node indices in the file are taken as 1-based.  Writers emit UTF-8
with LF line endings and single-space separators, arcs in insertion order.
"""
from __future__ import annotations

import io
import os
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, GraphError

__all__ = [
    "FormatError", "QuerySet", "read_graph", "write_graph", "read_queries", "write_queries",
    "random_queries",
]

PathOrFile = str | os.PathLike | io.TextIOBase


class FormatError(ValueError):
    """Malformed input; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


@dataclass
class QuerySet:
    """Ordered ``(s, t)`` pairs."""

    pairs: list[tuple[int, int]] = field(default_factory=list)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __getitem__(self, i):
        return self.pairs[i]

    def validate(self, graph: Graph) -> None:
        n = graph.node_count
        for i, (s, t) in enumerate(self.pairs):
            if not (0 <= s < n and 0 <= t < n):
                raise IndexError(f"query {i} ({s}, {t}) is outside the graph's {n} nodes")


@contextmanager
def _open(target: PathOrFile, mode: str):
    if isinstance(target, (str, os.PathLike)):
        with open(target, mode, encoding="utf-8", newline="\n" if "w" in mode else None) as fh:
            yield fh, os.fspath(target)
    else:
        yield target, getattr(target, "name", None)


def _lines(fh) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(line_no, fields)`` for content lines; comments become ``['c', ...]``."""
    for no, raw in enumerate(fh, 1):
        fields = raw.split()
        if fields:
            yield no, fields


def _is_base_directive(fields: list[str]) -> int | None:
    if len(fields) == 3 and fields[0] == "c" and fields[1] == "index-base":
        if fields[2] not in ("0", "1"):
            raise ValueError(f"index-base must be 0 or 1, got {fields[2]!r}")
        return int(fields[2])
    return None


def _int(tok: str, what: str, no: int, src) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise FormatError(f"{what} {tok!r} is not an integer", no, src) from None


def write_graph(graph: Graph, destination: PathOrFile, comments: Iterable[str] = ()) -> None:
    """Serialize ``graph``; each entry of ``comments`` becomes a ``c`` line before the header."""
    out = []
    for text in comments:
        for part in str(text).splitlines() or [""]:
            out.append(f"c {part}".rstrip() + "\n")
    out.append(f"p mosp {graph.node_count} {graph.arc_count} {graph.dimension}\n")
    tails = graph.tails.tolist()
    heads = graph.arc_heads.tolist()
    costs = graph.arc_costs.tolist()
    for u, v, c in zip(tails, heads, costs):
        out.append(f"a {u} {v} {' '.join(map(str, c))}\n")
    with _open(destination, "w") as (fh, _):
        fh.write("".join(out))


def read_graph(source: PathOrFile) -> Graph:
    """Parse a ``p mosp`` file; every error names its line."""
    with _open(source, "r") as (fh, src):
        header = None
        base = 0
        tails: list[int] = []
        heads: list[int] = []
        costs: list[list[int]] = []
        n = m = d = 0
        last = 0
        for no, f in _lines(fh):
            last = no
            tag = f[0]
            if tag == "c":
                try:
                    b = _is_base_directive(f)
                except ValueError as exc:
                    raise FormatError(str(exc), no, src) from None
                if b is not None:
                    if header is not None:
                        raise FormatError("index-base directive must precede the header", no, src)
                    base = b
                continue
            if tag == "p":
                if header is not None:
                    raise FormatError("second problem line", no, src)
                if len(f) != 5 or f[1] != "mosp":
                    raise FormatError("malformed header; expected 'p mosp <n> <m> <d>'", no, src)
                n = _int(f[2], "node count", no, src)
                m = _int(f[3], "arc count", no, src)
                d = _int(f[4], "dimension", no, src)
                if n < 0 or m < 0 or d < 1:
                    raise FormatError(f"invalid header values n={n} m={m} d={d}", no, src)
                header = no
                continue
            if tag == "a":
                if header is None:
                    raise FormatError("arc line before the 'p mosp' header", no, src)
                if len(f) != 3 + d:
                    raise FormatError(
                        f"arc line has {len(f) - 3} cost components, expected {d}", no, src
                    )
                if len(tails) == m:
                    raise FormatError(f"more arc lines than the {m} declared in the header", no, src)
                u = _int(f[1], "tail", no, src) - base
                v = _int(f[2], "head", no, src) - base
                for x, what in ((u, "tail"), (v, "head")):
                    if not 0 <= x < n:
                        raise FormatError(f"{what} {x + base} out of range for {n} nodes", no, src)
                if u == v:
                    raise FormatError(f"self-loop at node {u + base}", no, src)
                c = [_int(tok, "cost component", no, src) for tok in f[3:]]
                if any(x < 0 for x in c):
                    raise FormatError("negative cost component", no, src)
                tails.append(u)
                heads.append(v)
                costs.append(c)
                continue
            raise FormatError(f"unknown line type {tag!r}", no, src)
        if header is None:
            raise FormatError("missing 'p mosp' header", last or None, src)
        if len(tails) != m:
            raise FormatError(f"arc count mismatch: header declares {m}, found {len(tails)}", last, src)
    try:
        cost_arr = np.array(costs, dtype=np.int64).reshape(m, d)
    except OverflowError:
        raise FormatError("cost component exceeds the 64-bit range", None, src) from None
    try:
        return Graph.from_arrays(n, np.array(tails, dtype=np.int64), np.array(heads, dtype=np.int64), cost_arr)
    except GraphError as exc:  # pragma: no cover - every case is caught per line above
        raise FormatError(str(exc), None, src) from None


def write_queries(queries: QuerySet | Iterable[tuple[int, int]], destination: PathOrFile) -> None:
    pairs = queries.pairs if isinstance(queries, QuerySet) else list(queries)
    with _open(destination, "w") as (fh, _):
        fh.write("".join(f"q {s} {t}\n" for s, t in pairs))


def read_queries(source: PathOrFile) -> QuerySet:
    with _open(source, "r") as (fh, src):
        base = 0
        pairs = []
        for no, f in _lines(fh):
            if f[0] == "c":
                try:
                    b = _is_base_directive(f)
                except ValueError as exc:
                    raise FormatError(str(exc), no, src) from None
                if b is not None:
                    base = b
                continue
            if f[0] != "q" or len(f) != 3:
                raise FormatError("malformed query line; expected 'q <s> <t>'", no, src)
            s = _int(f[1], "source", no, src) - base
            t = _int(f[2], "target", no, src) - base
            if s < 0 or t < 0:
                raise FormatError("negative node index", no, src)
            pairs.append((s, t))
    return QuerySet(pairs)


def random_queries(node_count: int, k: int, seed: int) -> QuerySet:
    """``k`` seeded pairs with ``s != t`` drawn uniformly (needs at least 2 nodes)."""
    from .generators import Stream

    if node_count < 2:
        raise ValueError("random queries need at least 2 nodes")
    stream = Stream("queries", node_count, k, seed)
    pairs = []
    while len(pairs) < k:
        s, t = stream.integers(0, node_count - 1, 2).tolist()
        if s != t:
            pairs.append((s, t))
    return QuerySet(pairs)
