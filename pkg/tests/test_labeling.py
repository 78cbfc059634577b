import pytest
from hypothesis import given, settings, strategies as st

from mosp import SolverOptions, SolveTimeout, VARIANTS, build_graph, run_label_selection, run_node_selection, solve
from mosp.generators import gen_complete, gen_correlated_random, gen_grid
from mosp.labeling import (
    LabelArena, clean, dominates, measure_obsolete, push_label, reconstruct_path, tree_delete,
)
from mosp.labeling import kernels as K
from mosp.labeling.solvers import _run
from mosp.oracle import brute_force_front
from conftest import DIAMOND, small_graphs
from reference import reference_run

CONFIGS = [(v, p) for v in VARIANTS for p in (("fifo", "lex_front_back") if v.startswith("LS") else ("fifo",))]


def opts_for(v, p="fifo", **kw):
    return SolverOptions.variant(v, p, **kw)


# -- dominance ----------------------------------------------------------------

@pytest.mark.parametrize("a, b, expected", [
    ((1, 2, 3), (1, 2, 3), False),
    ((1, 2), (2, 2), True),
    ((1, 3), (2, 2), False),
    ((2, 2), (1, 2), False),
    ((0,), (1,), True),
])
def test_dominates(a, b, expected):
    assert dominates(a, b) is expected


def test_dominates_dimension_mismatch():
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=4).flatmap(
    lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 4), min_size=len(a), max_size=len(a)))))
def test_dominates_definition(pair):
    a, b = pair
    assert dominates(a, b) == (all(x <= y for x, y in zip(a, b)) and a != b)
    assert not (dominates(a, b) and dominates(b, a))


# -- arena primitives -----------------------------------------------------------

def arena_with(costs_at_w, d=2):
    """Root at node 0 and the given labels already cleaned into node 1."""
    ar = LabelArena(3, d)
    root = ar.add_root(0)
    ids = []
    for c in costs_at_w:
        l = push_label(ar, root, 1, c)
        kept, _ = clean(ar, 1, [l])
        ids += kept
    return ar, root, ids


def test_clean_incomparable_survives():
    ar, root, _ = arena_with([(1, 5), (5, 1)])
    new = push_label(ar, root, 1, (3, 3))
    survivors, delta = clean(ar, 1, [new])
    assert survivors == [new]
    assert ar.costs_at(1) == {(1, 5), (5, 1), (3, 3)}
    assert delta["labels_deleted"] == 0


def test_clean_strict_dominance_deletes_old():
    ar, root, (old,) = arena_with([(2, 2)])
    new = push_label(ar, root, 1, (1, 1))
    survivors, delta = clean(ar, 1, [new])
    assert survivors == [new]
    assert ar.costs_at(1) == {(1, 1)}
    assert ar.is_deleted(old)
    assert old not in ar.successors(root)
    assert delta["labels_deleted"] == 1


def test_clean_equal_cost_keeps_earliest():
    ar, root, (old,) = arena_with([(1, 1)])
    new = push_label(ar, root, 1, (1, 1))
    survivors, _ = clean(ar, 1, [new])
    assert survivors == []
    assert ar.labels_at(1) == [old]


def test_clean_reduces_batch_pairwise_first():
    ar = LabelArena(3, 2)
    root = ar.add_root(0)
    batch = [push_label(ar, root, 1, c) for c in [(3, 3), (1, 4), (2, 2), (2, 2)]]
    survivors, delta = clean(ar, 1, batch)
    assert ar.costs_at(1) == {(1, 4), (2, 2)}
    assert [ar.cost(l) for l in survivors] == [(1, 4), (2, 2)]
    assert delta["labels_deleted"] == 2


def test_clean_empty_batch():
    ar, _, _ = arena_with([(1, 1)])
    assert clean(ar, 1, [])[0] == []


def test_clean_rejects_set_members():
    ar, _, (old,) = arena_with([(1, 1)])
    with pytest.raises(ValueError):
        clean(ar, 1, [old])


@pytest.mark.parametrize("base, arc, expected", [
    ((0, 0), (1, 0), (1, 0)),
    ((3, 1, 4), (1, 1, 1), (4, 2, 5)),
    ((2, 2), (0, 0), (2, 2)),
])
def test_push_label(base, arc, expected):
    d = len(base)
    ar = LabelArena(3, d)
    root = ar.add_root(0)
    l = root
    if any(base):
        l = push_label(ar, root, 1, base)
        clean(ar, 1, [l])
    nl = push_label(ar, l, 2, arc)
    assert nl != l
    assert ar.cost(nl) == expected
    assert ar.node(nl) == 2 and ar.predecessor(nl) == l
    assert nl in ar.successors(l)
    assert nl not in ar.labels_at(2)


def test_push_label_overflow():
    ar = LabelArena(2, 1)
    root = ar.add_root(0)
    big = push_label(ar, root, 1, (2 ** 63 - 1,))
    with pytest.raises(OverflowError):
        push_label(ar, big, 0, (1,))


def test_push_label_checks():
    ar = LabelArena(2, 2)
    root = ar.add_root(0)
    with pytest.raises(ValueError):
        push_label(ar, root, 1, (1,))
    with pytest.raises(IndexError):
        push_label(ar, root, 5, (1, 1))
    with pytest.raises(IndexError):
        push_label(ar, 7, 1, (1, 1))


def small_tree():
    """l at node 1 with children a (node 2) and b (node 3); a has child g (node 4)."""
    ar = LabelArena(5, 1)
    root = ar.add_root(0)
    l = push_label(ar, root, 1, (1,))
    clean(ar, 1, [l])
    a = push_label(ar, l, 2, (1,))
    clean(ar, 2, [a])
    b = push_label(ar, l, 3, (1,))
    clean(ar, 3, [b])
    g = push_label(ar, a, 4, (1,))
    clean(ar, 4, [g])
    return ar, l, a, b, g


def test_tree_delete_leaf():
    ar, l, a, b, g = small_tree()
    ar.remove(g)
    assert tree_delete(ar, g) == 0


def test_tree_delete_counts_descendants():
    ar, l, a, b, g = small_tree()
    ar.remove(l)
    assert tree_delete(ar, l) == 3
    for x in (a, b, g):
        assert ar.is_deleted(x)
    assert all(ar.labels_at(u) == [] for u in (1, 2, 3, 4))
    assert ar.metrics()["td_subtree_deleted"] == 3


def test_tree_delete_needs_deleted_root():
    ar, l, *_ = small_tree()
    with pytest.raises(ValueError):
        tree_delete(ar, l)


def test_measure_obsolete_leaves_tree_intact():
    ar, l, a, b, g = small_tree()
    ar.mark_touched(a)
    ar.mark_touched(g)
    ar.remove(l)
    assert measure_obsolete(ar, l) == 2
    assert not any(ar.is_deleted(x) for x in (a, b, g))
    assert ar.successors(l) == [b, a] or ar.successors(l) == [a, b]
    # each touched label is counted once, however often its ancestors die
    ar.remove(a)
    assert measure_obsolete(ar, a) == 0
    m = ar.metrics()
    assert m["obsolete_touched"] == 2 and m["obsolete_subtree"] == 4


def test_reconstruct_path():
    ar = LabelArena(8, 1)
    root = ar.add_root(3)
    assert reconstruct_path(ar, root) == [3]
    l = root
    for node in (5, 1, 7, 0, 2):
        l = push_label(ar, l, node, (1,))
        clean(ar, node, [l])
    assert reconstruct_path(ar, l) == [3, 5, 1, 7, 0, 2]


# -- diamond traces -----------------------------------------------------------------

def test_diamond_tree_deletion_removes_one_descendant(diamond):
    res, m = run_label_selection(diamond, 0, 3, opts_for("LS-TD"))
    assert res.costs() == {(3, 3)}
    assert m.td_subtree_deleted == 1


def test_diamond_measure_counts_untouched_subtree(diamond):
    # (3,3) at v is dominated while its child (4,4) at t is still queued
    res, m = run_label_selection(diamond, 0, 3, opts_for("LS", measure_obsolete=True))
    assert res.costs() == {(3, 3)}
    assert (m.obsolete_touched, m.obsolete_subtree) == (0, 1)


def test_diamond_with_longer_detour_measures_popped_descendants():
    # s0 u1 x2 v3 w4 t5. FIFO pops s, v(3,3), u, w(4,4), t(4,4), x, then v(2,2)
    # kills v(3,3) whose children w(4,4) and t(4,4) were both popped.
    arcs = [(0, 3, (3, 3)), (0, 1, (1, 1)), (1, 2, (0, 0)), (2, 3, (1, 1)), (3, 4, (1, 1)), (3, 5, (1, 1))]
    g = build_graph(6, arcs)
    _, m = solve(g, 0, 5, opts_for("LS", measure_obsolete=True))
    assert (m.obsolete_touched, m.obsolete_subtree) == (2, 2)
    _, _, ref = reference_run(g, 0, 5, "LS", measure=True)
    measured = [e for e in ref.events if e[0] == "measured"]
    assert measured[0] == ("measured", 3, (3, 3), 2, 2)
    pops = [e[1:] for e in ref.events if e[0] == "pop"]
    assert pops[:7] == [(0, (0, 0)), (3, (3, 3)), (1, (1, 1)), (4, (4, 4)), (5, (4, 4)), (2, (1, 1)), (3, (2, 2))]
    _, mtd = solve(g, 0, 5, opts_for("LS-TD"))
    assert mtd.td_subtree_deleted == 2


# -- whole solvers ----------------------------------------------------------------

TWO_PATHS = [(0, 2, (3, 1)), (0, 1, (1, 1)), (1, 2, (1, 1))]


@pytest.mark.parametrize("v, p", CONFIGS)
def test_two_path_front(v, p):
    g = build_graph(3, TWO_PATHS)
    res, m = solve(g, 0, 2, opts_for(v, p))
    assert res.costs() == {(3, 1), (2, 2)}
    assert dict((c, path) for path, c in res.points) == {(2, 2): (0, 1, 2), (3, 1): (0, 2)}
    assert m.front_size == 2
    assert res.points == sorted(res.points, key=lambda x: x[1])


@pytest.mark.parametrize("v, p", CONFIGS)
def test_unreachable_target(v, p):
    g = build_graph(3, [(0, 1, (1, 1)), (2, 1, (1, 1))])
    res, m = solve(g, 0, 2, opts_for(v, p))
    assert res.points == [] and m.front_size == 0


@pytest.mark.parametrize("v, p", CONFIGS)
def test_single_objective_chain(v, p):
    g = build_graph(3, [(0, 1, (2,)), (1, 2, (2,))])
    res, _ = solve(g, 0, 2, opts_for(v, p))
    assert res.points == [((0, 1, 2), (4,))]


@pytest.mark.parametrize("v, p", CONFIGS)
def test_parallel_arcs(v, p):
    g = build_graph(3, [(0, 1, (1, 0)), (0, 1, (0, 1)), (1, 2, (1, 1))])
    res, _ = solve(g, 0, 2, opts_for(v, p))
    assert res.costs() == {(2, 1), (1, 2)}


@pytest.mark.parametrize("v, p", CONFIGS)
def test_source_equals_target(v, p):
    g = build_graph(3, TWO_PATHS)
    res, _ = solve(g, 1, 1, opts_for(v, p))
    assert res.points == [((1,), (0, 0))]


def test_entry_points_check_strategy():
    g = build_graph(3, TWO_PATHS)
    with pytest.raises(ValueError):
        run_label_selection(g, 0, 2, opts_for("NS"))
    with pytest.raises(ValueError):
        run_node_selection(g, 0, 2, opts_for("LS"))
    assert run_node_selection(g, 0, 2)[0].costs() == run_label_selection(g, 0, 2)[0].costs()
    with pytest.raises(IndexError):
        solve(g, 0, 3)


def test_options_validation():
    with pytest.raises(ValueError):
        SolverOptions(strategy="node_selection", queue_policy="lex_front_back")
    with pytest.raises(ValueError):
        SolverOptions(time_limit=0)
    with pytest.raises(ValueError):
        SolverOptions.variant("XS")
    assert SolverOptions.variant("LS-TD").name == "LS-TD"


@pytest.mark.parametrize("v", VARIANTS)
def test_overflow_aborts(v):
    g = build_graph(3, [(0, 1, (2 ** 62,)), (1, 2, (2 ** 62,)), (0, 2, (2 ** 63 - 1,)), (2, 0, (1,))])
    with pytest.raises(OverflowError):
        solve(g, 0, 2, opts_for(v))


@pytest.mark.parametrize("v", VARIANTS)
def test_time_limit(v):
    inst = gen_complete(60, 8, seed=1)
    with pytest.raises(SolveTimeout) as info:
        solve(inst.graph, inst.source, inst.target, opts_for(v, time_limit=0.05))
    assert info.value.metrics.labels_created > 0


def test_lex_policy_changes_order_not_front():
    inst = gen_grid(5, 3, seed=2)
    g, s, t = inst.graph, inst.source, inst.target
    a, ma = solve(g, s, t, opts_for("LS"))
    b, mb = solve(g, s, t, opts_for("LS", "lex_front_back"))
    assert a.costs() == b.costs()
    assert ma.counters() != mb.counters()


# -- properties -------------------------------------------------------------------

def check_path(g, path, cost):
    """True iff some choice of arcs along ``path`` sums exactly to ``cost``."""
    d = g.dimension
    sums = {(0,) * d}
    for u, v in zip(path, path[1:]):
        options = [c for h, c in g.out_arcs(u) if h == v]
        if not options:
            return False
        sums = {tuple(a + b for a, b in zip(x, c)) for x in sums for c in options}
    return cost in sums


@given(small_graphs())
def test_all_variants_match_oracle(case):
    g, s, t = case
    ref = brute_force_front(g, s, t).costs()
    for v, p in CONFIGS:
        res, m = solve(g, s, t, opts_for(v, p))
        assert res.costs() == ref, (v, p)
        assert m.front_size == len(res.points) == len(ref)


@given(small_graphs())
def test_paths_are_cost_consistent_walks(case):
    g, s, t = case
    for v, p in CONFIGS:
        res, _ = solve(g, s, t, opts_for(v, p))
        for path, cost in res.points:
            assert path[0] == s and path[-1] == t
            assert check_path(g, path, cost)


@given(small_graphs())
def test_counters_match_reference_solver(case):
    g, s, t = case
    for v, p in CONFIGS:
        for measure in (False, True):
            front, counters, _ = reference_run(g, s, t, v, lex=p != "fifo", measure=measure)
            res, m = solve(g, s, t, opts_for(v, p, measure_obsolete=measure))
            got = m.counters()
            got.pop("front_size")
            assert got == counters, (v, p, measure)
            assert res.points == front


@given(small_graphs())
def test_measurement_does_not_interfere(case):
    g, s, t = case
    for v, p in CONFIGS:
        a, ma = solve(g, s, t, opts_for(v, p))
        b, mb = solve(g, s, t, opts_for(v, p, measure_obsolete=True))
        assert a.points == b.points
        ca, cb = ma.counters(), mb.counters()
        for k in ("obsolete_touched", "obsolete_subtree"):
            ca.pop(k), cb.pop(k)
        assert ca == cb


@given(small_graphs())
def test_determinism(case):
    g, s, t = case
    for v, p in CONFIGS:
        a, ma = solve(g, s, t, opts_for(v, p, measure_obsolete=True))
        b, mb = solve(g, s, t, opts_for(v, p, measure_obsolete=True))
        assert a.points == b.points and ma.counters() == mb.counters()


@given(small_graphs())
def test_final_sets_are_antichains_and_td_is_sound(case):
    g, s, t = case
    for v, p in CONFIGS:
        res, m, arena = _run(g, s, t, opts_for(v, p), return_arena=True)
        assert m.labels_deleted <= m.labels_created
        live = 0
        for u in range(g.node_count):
            ids = arena.labels_at(u)
            live += len(ids)
            costs = [arena.cost(l) for l in ids]
            assert len(set(costs)) == len(costs)
            assert not any(dominates(a, b) for a in costs for b in costs)
            assert not any(arena.is_deleted(l) for l in ids)
        assert m.labels_created - m.labels_deleted == live
        for l in arena.labels_at(t):
            x = l
            while x is not None:
                assert not arena.is_deleted(x)
                x = arena.predecessor(x)
        if not v.endswith("-TD"):
            assert m.td_subtree_deleted == 0


def _free_list(state):
    out, x = [], int(state.ctr[K.FREE_HEAD])
    while x >= 0:
        out.append(x)
        x = int(state.lab[x, K.SLOT])
    return out


@given(small_graphs(max_arcs=24))
def test_recycled_labels_are_unreachable(case):
    g, s, t = case
    for v, p in CONFIGS:
        _, m, arena = _run(g, s, t, opts_for(v, p, measure_obsolete=True), return_arena=True)
        st_ = arena.state
        n = len(arena)
        free = _free_list(st_)
        assert len(free) == len(set(free)) == st_.ctr[K.N_FREE]
        assert set(free) == {x for x in range(n) if st_.flags[x] & K.FREED}
        assert all(st_.flags[x] & K.DELETED for x in free)
        held = [x for x in range(n) if not st_.flags[x] & K.FREED]
        preds = [int(st_.lab[x, K.PRED]) for x in held]
        assert not set(preds) & set(free)
        for x in held:
            assert st_.lab[x, K.REFS] == preds.count(x)
            assert not st_.flags[x] & (K.PINNED | K.FRESH)
            if st_.flags[x] & K.DELETED:
                assert st_.lab[x, K.REFS] > 0  # kept only as an ancestor
        if v == "NS-TD":
            live = sum(len(arena.labels_at(u)) for u in range(g.node_count))
            assert len(held) == live == m.labels_created - m.labels_deleted


@pytest.mark.parametrize("v", ["LS-TD", "NS-TD"])
def test_recycling_bounds_the_arena(v):
    # NS-TD keeps nothing but set members; LS-TD also keeps deleted labels that gained children afterwards
    inst = gen_correlated_random(150, 0.2, 3, seed=1)
    _, m, arena = _run(inst.graph, inst.source, inst.target, opts_for(v), return_arena=True)
    live = m.labels_created - m.labels_deleted
    held = len(arena) - arena.state.ctr[K.N_FREE]
    assert m.td_subtree_deleted > 100
    assert held < live + m.td_subtree_deleted
    if v == "NS-TD":
        assert held == live


@settings(max_examples=15)
@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]))
def test_grid_variants_agree(seed, d):
    inst = gen_grid(4, d, cost_lo=1, cost_hi=20, seed=seed)
    fronts = {frozenset(solve(inst.graph, inst.source, inst.target, opts_for(v, p))[0].costs()) for v, p in CONFIGS}
    assert len(fronts) == 1


def test_arena_grows_past_initial_capacity():
    inst = gen_complete(30, 4, seed=9)
    res, m, arena = _run(inst.graph, inst.source, inst.target, opts_for("NS"), return_arena=True)
    assert m.labels_created > 1024
    assert len(arena) > 1024
    assert res.costs() == solve(inst.graph, inst.source, inst.target, opts_for("LS"))[0].costs()
