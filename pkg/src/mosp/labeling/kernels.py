"""Compiled label-correcting kernels.

All label data lives in an :class:`ArenaState`, a namedtuple of flat arrays
indexed by label id.  Per-label integer fields share one row of ``lab``
(node, predecessor, first child, next and previous sibling, set slot).
Successor lists are intrusive doubly linked lists, so an empty list costs
nothing and unlinking is O(1).  The label set ``L_u`` of node ``u`` is the
run ``pool[start : start + size]`` with ``start, size, cap = sets[u]``, and a
copy of each member's cost sits in the matching rows of ``pool_cost`` so that
cleaning scans contiguous memory.  A run that outgrows its capacity is moved
to the end of the pool.

Fresh labels rejected by their first clean are never referenced again; the
drivers compact the survivors over them.  Deleted labels are recycled too:
``REFS`` counts the labels whose predecessor is a given label, and a deleted
label with no such children that is not pinned (queued, being expanded, or in
the node-selection snapshot) goes onto a free list threaded through its
``SLOT`` column.  Compaction fills free slots before extending the arena, so
memory follows the live labels and their ancestors rather than every label
ever stored.

The hot helpers take the arrays themselves.  Reading an array out of the
state tuple inside a branch makes numba emit reference-count updates for
every member of the tuple, which costs more than the label work itself, so
the drivers unpack the tuple once and only rebuild it when something grows.
The ``S``-taking functions at the bottom are the entry points used from
Python.
"""
from __future__ import annotations

import time
from collections import namedtuple

import numba
import numpy as np
from numba import njit

ArenaState = namedtuple(
    "ArenaState",
    ["cost", "lab", "flags", "sets", "pool", "pool_cost", "stack", "doomed", "ctr"],
)

# lab columns
NODE = 0
PRED = 1
CHILD = 2
NEXT = 3
PREV = 4
SLOT = 5  # position in the set; next free label once recycled
REFS = 6  # labels whose PRED is this one
N_LAB = 7

# sets columns
START = 0
SIZE = 1
CAP = 2

# label flags
DELETED = 1
PUSHED = 2
PINNED = 4  # id held outside the arena: queued, being expanded, or in the snapshot
TOUCHED = 8  # popped (LS) or pushed (NS)
COUNTED = 16  # already counted as an obsolete touch
DOOMED = 32  # scheduled for deletion inside the current clean
FRESH = 64  # created but not yet through its first clean; reclaimed by compaction
FREED = 128  # on the free list

# ctr slots
N_LABELS = 0
POOL_USED = 1
CREATED = 2
DELETED_CT = 3
PUSHES = 4
POPS = 5
TD_DELETED = 6
OBS_TOUCHED = 7
OBS_SUBTREE = 8
FREE_HEAD = 9
N_FREE = 10
N_CTR = 11

STATUS_OK = 0
STATUS_TIMEOUT = 1
STATUS_OVERFLOW = 2

_INT64_MAX = np.iinfo(np.int64).max
# label ids live in int32 columns: halves the link storage, which dominates memory
IDX = np.int32
MAX_LABELS = np.iinfo(np.int32).max
_TIME_CHECK_MASK = 255


def new_state(node_count: int, dimension: int, label_cap: int = 1024, pool_cap: int = 0) -> ArenaState:
    label_cap = max(int(label_cap), 16)
    pool_cap = max(int(pool_cap), 4 * node_count + 64)
    i64 = np.int64
    ctr = np.zeros(N_CTR, dtype=i64)
    ctr[FREE_HEAD] = -1
    return ArenaState(
        cost=np.zeros((label_cap, dimension), dtype=i64),
        lab=np.full((label_cap, N_LAB), -1, dtype=IDX),
        flags=np.zeros(label_cap, dtype=np.uint8),
        sets=np.zeros((node_count, 3), dtype=i64),
        pool=np.zeros(pool_cap, dtype=IDX),
        pool_cost=np.zeros((pool_cap, dimension), dtype=i64),
        stack=np.zeros(label_cap, dtype=IDX),
        doomed=np.zeros(label_cap, dtype=IDX),
        ctr=ctr,
    )


# -- capacity ----------------------------------------------------------------

@njit(cache=True)
def _grow1(a, n):
    b = np.empty(n, dtype=a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow2(a, n):
    b = np.empty((n, a.shape[1]), dtype=a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True, inline="always")
def _room(lab, sets, pool, ctr, labels, w, extra):
    if ctr[N_LABELS] + labels > lab.shape[0]:
        return False
    if w >= 0:
        size = sets[w, SIZE] + extra
        if size > sets[w, CAP] and ctr[POOL_USED] + max(4, 2 * size) > pool.shape[0]:
            return False
    return True


@njit(cache=True)
def _grow(S, labels, w, extra):
    cost, lab, flags, stack, doomed = S.cost, S.lab, S.flags, S.stack, S.doomed
    cap = lab.shape[0]
    need = S.ctr[N_LABELS] + labels
    if need > cap:
        if need > MAX_LABELS:
            raise MemoryError("label arena is limited to 2^31 - 1 labels")
        new = min(max(2 * cap, need), MAX_LABELS)
        cost = _grow2(cost, new)
        lab = _grow2(lab, new)
        flags = _grow1(flags, new)
        stack = np.empty(new, dtype=IDX)
        doomed = np.empty(new, dtype=IDX)
    pool, pool_cost = S.pool, S.pool_cost
    if w >= 0 and S.sets[w, SIZE] + extra > S.sets[w, CAP]:
        pneed = S.ctr[POOL_USED] + max(4, 2 * (S.sets[w, SIZE] + extra))
        if pneed > pool.shape[0]:
            new = max(2 * pool.shape[0], pneed)
            pool = _grow1(pool, new)
            pool_cost = _grow2(pool_cost, new)
    return ArenaState(cost, lab, flags, S.sets, pool, pool_cost, stack, doomed, S.ctr)


@njit(cache=True)
def _reserve(S, labels, w, extra):
    """Guarantee room for ``labels`` new labels and ``extra`` more members of ``L_w``."""
    if _room(S.lab, S.sets, S.pool, S.ctr, labels, w, extra):
        return S
    return _grow(S, labels, w, extra)


@njit(cache=True)
def _now():
    with numba.objmode(t="float64"):
        t = time.perf_counter()
    return t


# -- dominance ---------------------------------------------------------------

@njit(cache=True, inline="always")
def _compare(ca, a, cb, b):
    """Compare rows ``ca[a]`` and ``cb[b]``.

    0: incomparable, 1: ``a`` dominates ``b``, 2: ``b`` dominates ``a``, 3: equal.
    """
    # branch-free on purpose: componentwise outcomes on random costs are unpredictable
    le = True
    ge = True
    for i in range(ca.shape[1]):
        x = ca[a, i]
        y = cb[b, i]
        le &= x <= y
        ge &= x >= y
    return (1 if le else 0) | (2 if ge else 0)


@njit(cache=True)
def vec_dominates(a, b):
    le = True
    ne = False
    for i in range(a.shape[0]):
        if a[i] > b[i]:
            le = False
            break
        if a[i] != b[i]:
            ne = True
    return le and ne


@njit(cache=True, inline="always")
def _lex_less(cost, a, b):
    for i in range(cost.shape[1]):
        if cost[a, i] != cost[b, i]:
            return cost[a, i] < cost[b, i]
    return False


# -- label-set and tree maintenance ------------------------------------------

@njit(cache=True, inline="always")
def _set_reserve(sets, pool, pool_cost, ctr, w, size):
    if size <= sets[w, CAP]:
        return
    new = max(4, 2 * size)
    start = ctr[POOL_USED]
    old = sets[w, START]
    for i in range(sets[w, SIZE]):
        pool[start + i] = pool[old + i]
        for j in range(pool_cost.shape[1]):
            pool_cost[start + i, j] = pool_cost[old + i, j]
    sets[w, START] = start
    sets[w, CAP] = new
    ctr[POOL_USED] = start + new


@njit(cache=True, inline="always")
def _set_append(cost, lab, sets, pool, pool_cost, w, l):
    size = sets[w, SIZE]
    p = sets[w, START] + size
    pool[p] = l
    for j in range(cost.shape[1]):
        pool_cost[p, j] = cost[l, j]
    lab[l, SLOT] = size
    sets[w, SIZE] = size + 1


@njit(cache=True, inline="always")
def _set_remove(lab, sets, pool, pool_cost, l):
    w = lab[l, NODE]
    start = sets[w, START]
    last = start + sets[w, SIZE] - 1
    pos = start + lab[l, SLOT]
    moved = pool[last]
    pool[pos] = moved
    for j in range(pool_cost.shape[1]):
        pool_cost[pos, j] = pool_cost[last, j]
    lab[moved, SLOT] = lab[l, SLOT]
    lab[l, SLOT] = -1
    sets[w, SIZE] -= 1


@njit(cache=True, inline="always")
def _unlink(lab, l):
    p = lab[l, PRED]
    if p < 0:
        return
    prev = lab[l, PREV]
    nxt = lab[l, NEXT]
    if prev >= 0:
        lab[prev, NEXT] = nxt
    else:
        lab[p, CHILD] = nxt
    if nxt >= 0:
        lab[nxt, PREV] = prev
    lab[l, NEXT] = -1
    lab[l, PREV] = -1


@njit(cache=True)
def _release(lab, flags, ctr, x):
    """Recycle ``x`` if nothing refers to it any more, then its deleted ancestors likewise."""
    while x >= 0:
        f = flags[x]
        if not (f & DELETED) or (f & (PINNED | FRESH | FREED)) or lab[x, REFS] != 0:
            return
        flags[x] = f | FREED
        lab[x, SLOT] = ctr[FREE_HEAD]
        ctr[FREE_HEAD] = x
        ctr[N_FREE] += 1
        x = lab[x, PRED]
        if x >= 0:
            lab[x, REFS] -= 1


@njit(cache=True, inline="always")
def _disown(lab, flags, ctr, l):
    # ``l`` will never be referenced again: its predecessor loses a child
    p = lab[l, PRED]
    if p >= 0:
        lab[p, REFS] -= 1
        if flags[p] & DELETED:
            _release(lab, flags, ctr, p)


@njit(cache=True, inline="always")
def _take_free(lab, flags, ctr):
    x = ctr[FREE_HEAD]
    if x >= 0:
        ctr[FREE_HEAD] = lab[x, SLOT]
        ctr[N_FREE] -= 1
    return x


@njit(cache=True, inline="always")
def _drop_fresh(lab, flags, ctr, l):
    # a label rejected by its own clean: never a set member, never a parent
    flags[l] |= DELETED
    _unlink(lab, l)
    _disown(lab, flags, ctr, l)
    ctr[DELETED_CT] += 1


@njit(cache=True, inline="always")
def _kill(lab, flags, sets, pool, pool_cost, ctr, l):
    _set_remove(lab, sets, pool, pool_cost, l)
    flags[l] |= DELETED
    _unlink(lab, l)
    ctr[DELETED_CT] += 1
    _release(lab, flags, ctr, l)


@njit(cache=True)
def _add_root(cost, lab, flags, sets, pool, pool_cost, ctr, s):
    l = ctr[N_LABELS]
    cost[l, :] = 0
    lab[l, :] = -1
    lab[l, NODE] = s
    lab[l, REFS] = 0
    flags[l] = 0
    _set_reserve(sets, pool, pool_cost, ctr, s, sets[s, SIZE] + 1)
    _set_append(cost, lab, sets, pool, pool_cost, s, l)
    ctr[N_LABELS] = l + 1
    ctr[CREATED] += 1
    return l


@njit(cache=True, inline="always")
def _push(cost, lab, flags, ctr, l, head, arc_costs, a):
    # a raise in here makes every inlined call site slow; callers test for -1
    nl = ctr[N_LABELS]
    bad = False
    for i in range(cost.shape[1]):
        x = cost[l, i]
        y = arc_costs[a, i]
        bad |= x > _INT64_MAX - y
        cost[nl, i] = x + y
    lab[nl, NODE] = head
    lab[nl, PRED] = l
    lab[nl, CHILD] = -1
    lab[nl, SLOT] = -1
    lab[nl, REFS] = 0
    lab[l, REFS] += 1
    flags[nl] = FRESH
    first = lab[l, CHILD]
    lab[nl, NEXT] = first
    lab[nl, PREV] = -1
    if first >= 0:
        lab[first, PREV] = nl
    lab[l, CHILD] = nl
    ctr[N_LABELS] = nl + 1
    ctr[CREATED] += 1
    ctr[PUSHES] += 1
    return -1 if bad else nl


@njit(cache=True)
def _tree_delete(lab, flags, sets, pool, pool_cost, stack, ctr, root):
    # child lists inside the deleted tree are detached as they are read, so a
    # recycled child can never be reached through a stale list
    top = 0
    c = lab[root, CHILD]
    lab[root, CHILD] = -1
    while c >= 0:
        stack[top] = c
        top += 1
        c = lab[c, NEXT]
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        if not (flags[x] & DELETED):
            _set_remove(lab, sets, pool, pool_cost, x)
            flags[x] |= DELETED
            count += 1
        c = lab[x, CHILD]
        lab[x, CHILD] = -1
        while c >= 0:
            stack[top] = c
            top += 1
            c = lab[c, NEXT]
        _release(lab, flags, ctr, x)
    ctr[DELETED_CT] += count
    ctr[TD_DELETED] += count
    return count


@njit(cache=True)
def _measure_obsolete(lab, flags, stack, ctr, root):
    top = 0
    c = lab[root, CHILD]
    while c >= 0:
        stack[top] = c
        top += 1
        c = lab[c, NEXT]
    touched = 0
    size = 0
    while top > 0:
        top -= 1
        x = stack[top]
        size += 1
        f = flags[x]
        if (f & TOUCHED) and not (f & COUNTED):
            flags[x] = f | COUNTED
            touched += 1
        c = lab[x, CHILD]
        while c >= 0:
            stack[top] = c
            top += 1
            c = lab[c, NEXT]
    ctr[OBS_TOUCHED] += touched
    ctr[OBS_SUBTREE] += size
    return touched


@njit(cache=True, inline="always")
def _move_fresh(cost, lab, flags, sets, pool, src, dst):
    # relocate a fresh survivor: set member, no children, linked under its predecessor
    for j in range(cost.shape[1]):
        cost[dst, j] = cost[src, j]
    w = lab[src, NODE]
    p = lab[src, PRED]
    slot = lab[src, SLOT]
    prev = lab[src, PREV]
    nxt = lab[src, NEXT]
    lab[dst, NODE] = w
    lab[dst, PRED] = p
    lab[dst, CHILD] = -1
    lab[dst, SLOT] = slot
    lab[dst, PREV] = prev
    lab[dst, NEXT] = nxt
    lab[dst, REFS] = 0
    flags[dst] = flags[src]
    pool[sets[w, START] + slot] = dst
    if prev >= 0:
        lab[prev, NEXT] = dst
    else:
        lab[p, CHILD] = dst
    if nxt >= 0:
        lab[nxt, PREV] = dst


@njit(cache=True)
def _clean(cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr,
           w, batch, k, td, measure, compact, antichain):
    kept = 0
    if antichain:
        kept = k
    for i in range(0 if antichain else k):
        li = batch[i]
        dead = False
        j = 0
        while j < kept:
            r = _compare(cost, batch[j], cost, li)
            if r == 1 or r == 3:
                dead = True
                break
            if r == 2:
                _drop_fresh(lab, flags, ctr, batch[j])
                for q in range(j, kept - 1):
                    batch[q] = batch[q + 1]
                kept -= 1
                continue
            j += 1
        if dead:
            _drop_fresh(lab, flags, ctr, li)
        else:
            batch[kept] = li
            kept += 1

    start = sets[w, START]
    size = sets[w, SIZE]
    ndoom = 0
    out = 0
    for i in range(kept):
        li = batch[i]
        dead = False
        for p in range(start, start + size):
            r = _compare(pool_cost, p, cost, li)
            if r == 1 or r == 3:
                dead = True
                break
            if r == 2:
                lo = pool[p]
                if flags[lo] & DOOMED:
                    continue
                flags[lo] |= DOOMED
                doomed[ndoom] = lo
                ndoom += 1
        if dead:
            _drop_fresh(lab, flags, ctr, li)
        else:
            batch[out] = li
            out += 1

    if out:
        _set_reserve(sets, pool, pool_cost, ctr, w, size + out)
        for i in range(out):
            _set_append(cost, lab, sets, pool, pool_cost, w, batch[i])

    for i in range(ndoom):
        lo = doomed[i]
        flags[lo] &= ~np.uint8(DOOMED)
        if flags[lo] & DELETED:
            continue
        _kill(lab, flags, sets, pool, pool_cost, ctr, lo)
        if td:
            _tree_delete(lab, flags, sets, pool, pool_cost, stack, ctr, lo)
        elif measure:
            _measure_obsolete(lab, flags, stack, ctr, lo)

    if td and ndoom:
        m = 0
        for i in range(out):
            if not (flags[batch[i]] & DELETED):
                batch[m] = batch[i]
                m += 1
            else:
                _disown(lab, flags, ctr, batch[i])
        out = m

    if compact:
        # survivors go to recycled slots first, then over the rejected fresh ones
        base = ctr[N_LABELS] - k
        used = 0
        for i in range(out):
            src = batch[i]
            dst = _take_free(lab, flags, ctr)
            if dst < 0:
                dst = base + used
                used += 1
            if src != dst:
                _move_fresh(cost, lab, flags, sets, pool, src, dst)
                batch[i] = dst
        ctr[N_LABELS] = base + used
    for i in range(out):
        flags[batch[i]] &= ~np.uint8(FRESH)
    return out


# -- drivers -----------------------------------------------------------------

@njit(cache=True)
def _deque_grow(buf, head, size):
    cap = buf.shape[0]
    new = np.empty(2 * cap, dtype=buf.dtype)
    for i in range(size):
        new[i] = buf[(head + i) % cap]
    return new


@njit(cache=True)
def label_selection(offsets, heads, arc_costs, s, td, lex, measure, time_limit, S):
    """FIFO label selection (optionally with the lexicographic front/back rule)."""
    S = _reserve(S, 1, s, 1)
    cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr = S
    root = _add_root(cost, lab, flags, sets, pool, pool_cost, ctr, s)
    buf = np.empty(64, dtype=IDX)
    head = 0
    size = 1
    buf[0] = root
    flags[root] |= PINNED
    batch = np.empty(1, dtype=np.int64)
    t0 = _now() if time_limit > 0 else 0.0
    it = 0
    while size > 0:
        l = buf[head]
        head = (head + 1) % buf.shape[0]
        size -= 1
        if flags[l] & DELETED:
            flags[l] &= ~np.uint8(PINNED)
            _release(lab, flags, ctr, l)
            continue
        # stays pinned while expanded: tree deletion may remove it mid-loop
        flags[l] |= TOUCHED
        ctr[POPS] += 1
        u = lab[l, NODE]
        for a in range(offsets[u], offsets[u + 1]):
            w = heads[a]
            if not _room(lab, sets, pool, ctr, 1, w, 1):
                S = _grow(S, 1, w, 1)
                cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr = S
            nl = _push(cost, lab, flags, ctr, l, w, arc_costs, a)
            if nl < 0:
                return S, STATUS_OVERFLOW
            batch[0] = nl
            if _clean(cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr,
                      w, batch, 1, td, measure, True, True) == 1:
                nl = batch[0]
                flags[nl] |= PINNED
                if size == buf.shape[0]:
                    buf = _deque_grow(buf, head, size)
                    head = 0
                cap = buf.shape[0]
                if lex and size > 0 and _lex_less(cost, nl, buf[head]):
                    head = (head - 1) % cap
                    buf[head] = nl
                else:
                    buf[(head + size) % cap] = nl
                size += 1
        flags[l] &= ~np.uint8(PINNED)
        if flags[l] & DELETED:
            _release(lab, flags, ctr, l)
        it += 1
        if time_limit > 0 and (it & _TIME_CHECK_MASK) == 0:
            if _now() - t0 > time_limit:
                return S, STATUS_TIMEOUT
    return S, STATUS_OK


@njit(cache=True)
def node_selection(offsets, heads, arc_costs, s, td, measure, time_limit, S):
    """FIFO node selection over a ring buffer holding each open node once."""
    n = offsets.shape[0] - 1
    S = _reserve(S, 1, s, 1)
    cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr = S
    _add_root(cost, lab, flags, sets, pool, pool_cost, ctr, s)
    ring = np.empty(n, dtype=np.int64)
    queued = np.zeros(n, dtype=np.bool_)
    rhead = 0
    rlen = 1
    ring[0] = s
    queued[s] = True
    snap = np.empty(16, dtype=np.int64)
    batch = np.empty(16, dtype=np.int64)
    t0 = _now() if time_limit > 0 else 0.0
    it = 0
    while rlen > 0:
        u = ring[rhead]
        rhead = (rhead + 1) % n
        rlen -= 1
        queued[u] = False
        ctr[POPS] += 1

        size = sets[u, SIZE]
        if size > snap.shape[0]:
            snap = np.empty(2 * size, dtype=np.int64)
            batch = np.empty(2 * size, dtype=np.int64)
        k = 0
        start = sets[u, START]
        for p in range(start, start + size):
            l = pool[p]
            if not (flags[l] & PUSHED):
                flags[l] |= PINNED
                snap[k] = l
                k += 1
        if k == 0:
            continue

        for a in range(offsets[u], offsets[u + 1]):
            w = heads[a]
            if not _room(lab, sets, pool, ctr, k, w, k):
                S = _grow(S, k, w, k)
                cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr = S
            nb = 0
            for i in range(k):
                l = snap[i]
                if flags[l] & DELETED:
                    continue
                nl = _push(cost, lab, flags, ctr, l, w, arc_costs, a)
                if nl < 0:
                    return S, STATUS_OVERFLOW
                batch[nb] = nl
                nb += 1
            if nb == 0:
                break
            if _clean(cost, lab, flags, sets, pool, pool_cost, stack, doomed, ctr,
                      w, batch, nb, td, measure, True, True) > 0 and not queued[w]:
                ring[(rhead + rlen) % n] = w
                rlen += 1
                queued[w] = True
        for i in range(k):
            l = snap[i]
            flags[l] = (flags[l] & ~np.uint8(PINNED)) | PUSHED | TOUCHED
            if flags[l] & DELETED:
                _release(lab, flags, ctr, l)

        it += 1
        if time_limit > 0 and (it & _TIME_CHECK_MASK) == 0:
            if _now() - t0 > time_limit:
                return S, STATUS_TIMEOUT
    return S, STATUS_OK


# -- entry points on a whole state -------------------------------------------

@njit(cache=True)
def add_root(S, s):
    return _add_root(S.cost, S.lab, S.flags, S.sets, S.pool, S.pool_cost, S.ctr, s)


@njit(cache=True)
def push(S, l, head, arc_cost):
    """Create the label ``l + arc_cost`` at ``head`` as a new successor of ``l``.

    Returns -1 if a component overflows 64 bits; the arena is then unusable.
    """
    return _push(S.cost, S.lab, S.flags, S.ctr, l, head, arc_cost.reshape((1, arc_cost.shape[0])), 0)


@njit(cache=True)
def kill(S, l):
    """Remove a live member from its label set, mark it deleted and unlink it."""
    _kill(S.lab, S.flags, S.sets, S.pool, S.pool_cost, S.ctr, l)


@njit(cache=True)
def tree_delete(S, root):
    """Delete every descendant of ``root``; returns how many were deleted."""
    return _tree_delete(S.lab, S.flags, S.sets, S.pool, S.pool_cost, S.stack, S.ctr, root)


@njit(cache=True)
def measure_obsolete(S, root):
    """Count descendants of ``root`` that were already touched; the tree is left intact.

    A label is counted at most once per run, however many of its ancestors
    are deleted.  The traversed subtree size goes to ``OBS_SUBTREE``.
    """
    return _measure_obsolete(S.lab, S.flags, S.stack, S.ctr, root)


@njit(cache=True)
def clean(S, w, batch, k, td, measure, compact, antichain=False):
    """Merge the fresh labels ``batch[:k]`` (all at ``w``) into ``L_w``.

    Fresh labels are first reduced among themselves (skipped when the caller
    knows they form an antichain), then compared with the old members.  Equal
    costs keep the older label.  Survivors are inserted, dominated old members
    are deleted (plus their subtree when ``td``), and the surviving fresh
    labels are compacted to the front of ``batch``.  Returns the survivor
    count.  Caller reserves pool room for ``k`` members.

    With ``compact`` the batch must be the ``k`` most recently created
    labels; survivors are then renumbered onto the lowest of those ids and
    the rest are released.
    """
    return _clean(S.cost, S.lab, S.flags, S.sets, S.pool, S.pool_cost, S.stack, S.doomed, S.ctr,
                  w, batch, k, td, measure, compact, antichain)


@njit(cache=True)
def collect(S, t):
    """Labels of ``L_t`` and their predecessor chains, flattened.

    Returns ``(ids, paths, lengths)``: path ``i`` is
    ``paths[sum(lengths[:i]) : sum(lengths[:i + 1])]`` in source-to-target order.
    """
    lab = S.lab
    size = S.sets[t, SIZE]
    start = S.sets[t, START]
    ids = np.empty(size, dtype=np.int64)
    lengths = np.empty(size, dtype=np.int64)
    total = 0
    for i in range(size):
        l = S.pool[start + i]
        ids[i] = l
        depth = 0
        while l >= 0:
            depth += 1
            l = lab[l, PRED]
        lengths[i] = depth
        total += depth
    paths = np.empty(total, dtype=np.int64)
    pos = 0
    for i in range(size):
        l = ids[i]
        end = pos + lengths[i]
        j = end - 1
        while l >= 0:
            paths[j] = lab[l, NODE]
            j -= 1
            l = lab[l, PRED]
        pos = end
    return ids, paths, lengths
