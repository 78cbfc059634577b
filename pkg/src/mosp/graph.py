"""Directed multigraph with d-dimensional nonnegative integer arc costs.

Arcs are kept twice: in insertion order (for serialization and equality) and
in a forward-star layout where the out-arcs of node ``u`` occupy the
contiguous range ``offsets[u]:offsets[u + 1]`` of ``heads`` / ``costs``.
The solver kernels read the forward-star arrays directly.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from numbers import Integral

import numpy as np

__all__ = ["Graph", "GraphError", "build_graph", "out_arcs"]


class GraphError(ValueError):
    """Raised for malformed graph input."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Immutable directed graph; build with :func:`build_graph` or ``Graph.from_arrays``."""

    __slots__ = (
        "node_count", "arc_count", "dimension",
        "tails", "arc_heads", "arc_costs",
        "offsets", "heads", "costs", "arc_index",
    )

    def __init__(self, node_count: int, tails: np.ndarray, heads: np.ndarray, costs: np.ndarray):
        self.node_count = int(node_count)
        self.arc_count = int(tails.shape[0])
        self.dimension = int(costs.shape[1])
        self.tails = _frozen(tails)
        self.arc_heads = _frozen(heads)
        self.arc_costs = _frozen(costs)

        # stable sort keeps insertion order within each tail
        order = np.argsort(tails, kind="stable")
        counts = np.bincount(tails, minlength=self.node_count)
        offsets = np.zeros(self.node_count + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        self.offsets = _frozen(offsets)
        self.heads = _frozen(np.ascontiguousarray(heads[order]))
        self.costs = _frozen(np.ascontiguousarray(costs[order]))
        self.arc_index = _frozen(order.astype(np.int64))

    @classmethod
    def from_arrays(cls, node_count: int, tails, heads, costs) -> Graph:
        """Validate and wrap arc arrays (insertion order) without per-arc Python work."""
        if isinstance(node_count, bool) or not isinstance(node_count, Integral) or node_count < 0:
            raise GraphError(f"node_count must be a nonnegative integer, got {node_count!r}")
        tails = np.asarray(tails)
        heads = np.asarray(heads)
        costs = np.asarray(costs)
        m = tails.shape[0] if tails.ndim == 1 else -1
        if tails.ndim != 1 or heads.shape != tails.shape:
            raise GraphError("tails and heads must be 1-d arrays of equal length")
        if costs.ndim != 2 or costs.shape[0] != m:
            raise GraphError("costs must be an (arc_count, d) array")
        if costs.shape[1] < 1:
            raise GraphError("cost dimension must be at least 1")
        for name, arr in (("tail", tails), ("head", heads), ("cost", costs)):
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                raise GraphError(f"{name} values must be integers")
        tails = tails.astype(np.int64, copy=True)
        heads = heads.astype(np.int64, copy=True)
        costs = np.ascontiguousarray(costs, dtype=np.int64).copy()
        if m:
            bad = (tails < 0) | (tails >= node_count) | (heads < 0) | (heads >= node_count)
            if bad.any():
                i = int(np.flatnonzero(bad)[0])
                raise GraphError(
                    f"arc {i} ({tails[i]} -> {heads[i]}) has an endpoint outside [0, {node_count})"
                )
            loops = tails == heads
            if loops.any():
                i = int(np.flatnonzero(loops)[0])
                raise GraphError(f"arc {i} is a self-loop at node {tails[i]}")
            if (costs < 0).any():
                i = int(np.flatnonzero((costs < 0).any(axis=1))[0])
                raise GraphError(f"arc {i} has a negative cost component")
        return cls(node_count, tails, heads, costs)

    def out_arcs(self, u: int) -> Iterator[tuple[int, tuple[int, ...]]]:
        """Yield ``(head, cost)`` for every arc leaving ``u`` in insertion order."""
        self._check_node(u)
        lo, hi = self.offsets[u], self.offsets[u + 1]
        heads, costs = self.heads, self.costs
        for a in range(lo, hi):
            yield int(heads[a]), tuple(int(c) for c in costs[a])

    def out_degree(self, u: int) -> int:
        self._check_node(u)
        return int(self.offsets[u + 1] - self.offsets[u])

    def arcs(self) -> Iterator[tuple[int, int, tuple[int, ...]]]:
        """All arcs as ``(tail, head, cost)`` in insertion order."""
        for i in range(self.arc_count):
            yield (int(self.tails[i]), int(self.arc_heads[i]),
                   tuple(int(c) for c in self.arc_costs[i]))

    def _check_node(self, u) -> None:
        if isinstance(u, bool) or not isinstance(u, Integral) or not 0 <= u < self.node_count:
            raise IndexError(f"node {u!r} out of range [0, {self.node_count})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.dimension == other.dimension
            and np.array_equal(self.tails, other.tails)
            and np.array_equal(self.arc_heads, other.arc_heads)
            and np.array_equal(self.arc_costs, other.arc_costs)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.arc_count}, d={self.dimension})"

    def __getstate__(self):
        return (self.node_count, np.array(self.tails), np.array(self.arc_heads), np.array(self.arc_costs))

    def __setstate__(self, state):
        Graph.__init__(self, *state)


def build_graph(
    node_count: int,
    arcs: Iterable[tuple[int, int, Sequence[int]]],
    dimension: int | None = None,
) -> Graph:
    """Build a graph from ``(tail, head, cost_vector)`` triples.

    ``dimension`` is only needed to fix ``d`` for a graph without arcs
    (it defaults to 1 in that case).
    """
    tails: list[int] = []
    heads: list[int] = []
    costs: list[tuple[int, ...]] = []
    d = dimension
    for i, (tail, head, cost) in enumerate(arcs):
        vec = tuple(cost)
        if d is None:
            d = len(vec)
        if len(vec) != d:
            raise GraphError(f"arc {i} has {len(vec)} cost components, expected {d}")
        for c in vec:
            if isinstance(c, bool) or not isinstance(c, Integral):
                raise GraphError(f"arc {i} has a non-integer cost component {c!r}")
        for end in (tail, head):
            if isinstance(end, bool) or not isinstance(end, Integral):
                raise GraphError(f"arc {i} has a non-integer endpoint {end!r}")
        tails.append(int(tail))
        heads.append(int(head))
        costs.append(vec)
    if d is None:
        d = 1
    if d < 1:
        raise GraphError("cost dimension must be at least 1")
    cost_arr = np.array(costs, dtype=object).reshape(len(costs), d) if costs else np.zeros((0, d))
    if costs:
        big = max(max(abs(int(c)) for c in vec) for vec in costs)
        if big > np.iinfo(np.int64).max:
            raise GraphError("cost component exceeds the 64-bit signed range")
        cost_arr = cost_arr.astype(np.int64)
    return Graph.from_arrays(
        node_count,
        np.array(tails, dtype=np.int64),
        np.array(heads, dtype=np.int64),
        cost_arr.astype(np.int64),
    )


def out_arcs(graph: Graph, u: int) -> list[tuple[int, tuple[int, ...]]]:
    return list(graph.out_arcs(u))
