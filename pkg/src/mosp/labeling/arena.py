"""Python handle on the label arena, exposing the kernel primitives one at a time.

The solvers drive the kernels directly; this module is the surface used for
inspection, tests and experiments with single pushes or cleans.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from . import kernels as K

__all__ = [
    "LabelArena", "dominates", "push_label", "clean", "tree_delete",
    "measure_obsolete", "reconstruct_path",
]

_METRIC_SLOTS = {
    "labels_created": K.CREATED,
    "labels_deleted": K.DELETED_CT,
    "label_pushes": K.PUSHES,
    "queue_pops": K.POPS,
    "td_subtree_deleted": K.TD_DELETED,
    "obsolete_touched": K.OBS_TOUCHED,
    "obsolete_subtree": K.OBS_SUBTREE,
}


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a <= b`` componentwise and ``a != b``."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return bool(K.vec_dominates(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)))


class LabelArena:
    """Label storage for one run on a graph with ``node_count`` nodes and ``d`` objectives."""

    def __init__(self, node_count: int, dimension: int, label_cap: int = 1024):
        self.node_count = node_count
        self.dimension = dimension
        self.state = K.new_state(node_count, dimension, label_cap)

    @classmethod
    def from_state(cls, state: K.ArenaState) -> LabelArena:
        arena = cls.__new__(cls)
        arena.node_count = state.sets.shape[0]
        arena.dimension = state.cost.shape[1]
        arena.state = state
        return arena

    def __len__(self) -> int:
        return int(self.state.ctr[K.N_LABELS])

    def _reserve(self, labels: int, node: int = -1, extra: int = 0) -> None:
        self.state = K._reserve(self.state, labels, node, extra)

    def _check_label(self, l: int) -> None:
        if not 0 <= l < len(self):
            raise IndexError(f"label {l} does not exist")

    def add_root(self, s: int) -> int:
        """Create the zero-cost root label at ``s`` and put it into ``L_s``."""
        if not 0 <= s < self.node_count:
            raise IndexError(f"node {s} out of range")
        self._reserve(1, s, 1)
        return int(K.add_root(self.state, s))

    def cost(self, l: int) -> tuple[int, ...]:
        self._check_label(l)
        return tuple(int(c) for c in self.state.cost[l])

    def node(self, l: int) -> int:
        self._check_label(l)
        return int(self.state.lab[l, K.NODE])

    def predecessor(self, l: int) -> int | None:
        self._check_label(l)
        p = int(self.state.lab[l, K.PRED])
        return None if p < 0 else p

    def successors(self, l: int) -> list[int]:
        self._check_label(l)
        out = []
        lab = self.state.lab
        c = int(lab[l, K.CHILD])
        while c >= 0:
            out.append(c)
            c = int(lab[c, K.NEXT])
        return out

    def is_deleted(self, l: int) -> bool:
        self._check_label(l)
        return bool(self.state.flags[l] & K.DELETED)

    def labels_at(self, u: int) -> list[int]:
        """Live members of ``L_u`` (storage order)."""
        st = self.state
        start, size = int(st.sets[u, K.START]), int(st.sets[u, K.SIZE])
        return [int(x) for x in st.pool[start:start + size]]

    def costs_at(self, u: int) -> set[tuple[int, ...]]:
        return {self.cost(l) for l in self.labels_at(u)}

    def mark_touched(self, l: int) -> None:
        """Flag ``l`` as processed, as a queue pop (LS) or push sweep (NS) would."""
        self._check_label(l)
        self.state.flags[l] |= K.TOUCHED

    def remove(self, l: int) -> None:
        """Delete a live label from its set and unlink it, leaving its subtree alone."""
        self._check_label(l)
        if self.is_deleted(l) or self.state.lab[l, K.SLOT] < 0:
            raise ValueError(f"label {l} is not a live set member")
        K.kill(self.state, l)

    def metrics(self) -> dict[str, int]:
        ctr = self.state.ctr
        return {name: int(ctr[slot]) for name, slot in _METRIC_SLOTS.items()}


def push_label(arena: LabelArena, l: int, head: int, arc_cost: Sequence[int]) -> int:
    """New label at ``head`` with cost ``cost(l) + arc_cost`` and predecessor ``l``.

    The label is not inserted into ``L_head``; :func:`clean` does that.
    Raises ``OverflowError`` when a component leaves the 64-bit range.
    """
    arena._check_label(l)
    if arena.is_deleted(l):
        raise ValueError(f"label {l} is deleted")
    if not 0 <= head < arena.node_count:
        raise IndexError(f"node {head} out of range")
    vec = np.asarray(arc_cost, dtype=np.int64)
    if vec.shape != (arena.dimension,):
        raise ValueError(f"arc cost has {vec.size} components, expected {arena.dimension}")
    arena._reserve(1)
    nl = int(K.push(arena.state, l, head, vec))
    if nl < 0:
        raise OverflowError("cost vector overflow: path costs exceed the 64-bit range")
    return nl


def clean(
    arena: LabelArena, w: int, new_labels: Sequence[int], td: bool = False, measure: bool = False,
) -> tuple[list[int], dict[str, int]]:
    """Merge fresh labels at ``w`` into ``L_w``; returns survivors and counter deltas."""
    for l in new_labels:
        arena._check_label(l)
        if arena.node(l) != w or arena.state.lab[l, K.SLOT] >= 0 or arena.is_deleted(l):
            raise ValueError(f"label {l} is not a fresh label at node {w}")
    if not new_labels:
        return [], {name: 0 for name in _METRIC_SLOTS}
    before = arena.metrics()
    arena._reserve(0, w, len(new_labels))
    batch = np.array(new_labels, dtype=np.int64)
    kept = K.clean(arena.state, w, batch, len(batch), td, measure, False)
    after = arena.metrics()
    return [int(x) for x in batch[:kept]], {k: after[k] - before[k] for k in after}


def tree_delete(arena: LabelArena, root: int) -> int:
    """Delete every descendant of an already-deleted label; returns the number deleted."""
    arena._check_label(root)
    if not arena.is_deleted(root):
        raise ValueError(f"label {root} must be deleted before its tree is")
    return int(K.tree_delete(arena.state, root))


def measure_obsolete(arena: LabelArena, deleted: int) -> int:
    """Number of already-touched descendants of ``deleted`` (tree left intact)."""
    arena._check_label(deleted)
    return int(K.measure_obsolete(arena.state, deleted))


def reconstruct_path(arena: LabelArena, l: int) -> list[int]:
    arena._check_label(l)
    lab = arena.state.lab
    path = []
    while l >= 0:
        path.append(int(lab[l, K.NODE]))
        l = int(lab[l, K.PRED])
    path.reverse()
    return path
