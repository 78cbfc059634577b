"""Brute-force Pareto fronts by exhaustive simple-path enumeration.

With nonnegative arc costs, removing a cycle from an s-t walk never
increases any cost component, so every walk is weakly dominated by a simple
path.  The minimal vectors over simple paths are therefore the minimal
vectors over all walks; zero-cost cycles only produce ties, which a simple
path also attains.
"""
from __future__ import annotations

from .graph import Graph
from .labeling.solvers import ParetoResult

__all__ = ["OracleGuardError", "brute_force_front", "minimal_vectors", "DEFAULT_MAX_NODES"]

DEFAULT_MAX_NODES = 14


class OracleGuardError(ValueError):
    """The graph is larger than the enumeration guard allows."""


def _weakly_below(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimal_vectors(items):
    """Keep the ``(path, cost)`` pairs whose cost is minimal; first occurrence wins ties."""
    kept: list[tuple] = []
    for path, cost in items:
        if any(_weakly_below(c, cost) for _, c in kept):
            continue
        kept = [(p, c) for p, c in kept if not _weakly_below(cost, c)]
        kept.append((path, cost))
    return kept


def brute_force_front(graph: Graph, s: int, t: int, max_nodes: int = DEFAULT_MAX_NODES) -> ParetoResult:
    """Enumerate every simple ``s``-``t`` path and return the minimal cost vectors."""
    if graph.node_count > max_nodes:
        raise OracleGuardError(
            f"graph has {graph.node_count} nodes; the oracle guard allows {max_nodes}"
        )
    for v in (s, t):
        if not 0 <= v < graph.node_count:
            raise IndexError(f"node {v} out of range")
    d = graph.dimension
    adj = [list(graph.out_arcs(u)) for u in range(graph.node_count)]
    found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    on_path = [False] * graph.node_count
    path = [s]
    on_path[s] = True

    def dfs(u: int, cost: tuple[int, ...]) -> None:
        if u == t:
            found.append((tuple(path), cost))
            return
        for w, c in adj[u]:
            if on_path[w]:
                continue
            on_path[w] = True
            path.append(w)
            dfs(w, tuple(a + b for a, b in zip(cost, c)))
            path.pop()
            on_path[w] = False

    dfs(s, (0,) * d)
    points = minimal_vectors(found)
    points.sort(key=lambda p: p[1])
    return ParetoResult(points)
