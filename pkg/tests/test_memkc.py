import itertools

import pytest
from hypothesis import given, settings, strategies as st

from topkmaxsat.core import Formula, TopKInstance, coverage_mask
from topkmaxsat.ee import grow_to_maximal
from topkmaxsat.memkc import (
    EnumerationOverflow,
    me_enumerate,
    memkc_solve,
    mkc,
    mkc_masks,
    remove_dominated,
)

from conftest import naive_cover, naive_topk, random_formula, truth_table


def test_me_examples():
    assert sorted(me_enumerate([(1, 2), (-1, -2)], 2)) == [(False, True), (True, False)]
    assert me_enumerate([(1,), (-1,)], 1) == []
    assert sorted(me_enumerate([], 1, soft=[(1,)])) == [(False,), (True,)]


def test_me_fixes_unused_variables_true():
    assert me_enumerate([(1, 2), (-1, -2)], 3) == [(True, False, True), (False, True, True)]


def test_me_respects_partial():
    assert me_enumerate([(1, 2), (-1, -2)], 2, partial={2: True}) == [(False, True)]


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_me_equals_truth_table(seed):
    f = random_formula(seed, n=3 + seed % 10)
    used = {abs(l) for c in (*f.hard, *f.soft) for l in c}
    expected = {a for a in truth_table(f) if all(a[v - 1] for v in range(1, f.num_vars + 1) if v not in used)}
    got = me_enumerate(f.hard, f.num_vars, soft=f.soft)
    assert len(got) == len(set(got))
    assert set(got) == expected


def test_me_cap():
    with pytest.raises(EnumerationOverflow, match="cap=3"):
        me_enumerate([], 3, soft=[(1,), (2,), (3,)], cap=3)


def test_mkc_examples(ex1):
    S = [(True, False), (False, True)]
    count, chosen = mkc(ex1, S, 2)
    assert count == 2 and sorted(chosen) == sorted(S)
    assert mkc(ex1, S, 0) == (0, [])
    count, chosen = mkc(ex1, S, 1)
    assert count == 1 and len(chosen) == 1
    # already-selected models are not credited again
    assert mkc(ex1, S, 1, selected=[(True, False)]) == (1, [(False, True)])


def _exhaustive(masks, k):
    best = 0
    for r in range(0, min(k, len(masks)) + 1):
        for pick in itertools.combinations(masks, r):
            u = 0
            for m in pick:
                u |= m
            best = max(best, bin(u).count("1"))
    return best


@settings(max_examples=100)
@given(st.lists(st.integers(0, (1 << 10) - 1), max_size=20), st.integers(0, 5))
def test_mkc_matches_exhaustive(masks, k):
    res = mkc_masks(masks, k)
    assert res.best_count == _exhaustive(masks, k)
    assert len(res.chosen) <= k
    u = 0
    for i in res.chosen:
        u |= masks[i]
    assert bin(u).count("1") == res.best_count
    assert mkc_masks(masks, k, bound=False).best_count == res.best_count


@settings(max_examples=60)
@given(st.lists(st.integers(0, (1 << 8) - 1), max_size=16), st.integers(1, 4))
def test_dominance_pruning_sound(masks, k):
    kept = [masks[i] for i in remove_dominated(masks)]
    assert mkc_masks(kept, k).best_count == mkc_masks(masks, k).best_count
    for m in masks:
        assert any(m & ~d == 0 for d in kept)


def test_memkc_examples(ex1):
    s2 = memkc_solve(TopKInstance(ex1, 2))
    assert (s2.objective, s2.uncovered, s2.status) == (2, 0, "optimal")
    s1 = memkc_solve(TopKInstance(ex1, 1))
    assert (s1.objective, s1.uncovered) == (1, 1)
    bad = Formula(1, ((1,), (-1,)), ((1,),))
    s = memkc_solve(TopKInstance(bad, 3))
    assert s.status == "infeasible-hard" and s.objective == 0 and s.models == ()


def test_memkc_overflow():
    f = Formula(4, (), tuple((v,) for v in range(1, 5)))
    with pytest.raises(EnumerationOverflow):
        memkc_solve(TopKInstance(f, 1), cap=10)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_memkc_matches_brute_force(seed, k):
    f = random_formula(seed)
    expected = naive_topk(f, k)
    sol = memkc_solve(TopKInstance(f, k))
    if expected is None:
        assert sol.status == "infeasible-hard"
        return
    assert sol.objective == expected
    assert sol.verify(f)
    for m in sol.models:
        assert grow_to_maximal(f, m) == m
    unpruned = memkc_solve(TopKInstance(f, k), prune_dominated=False)
    assert unpruned.objective == expected


def test_monotone_and_saturating():
    for seed in range(30):
        f = random_formula(seed, n=6 + seed % 5)
        covs = {naive_cover(f, a) for a in truth_table(f)}
        if not covs:
            continue
        k0 = len([c for c in covs if not any(c < d for d in covs)])
        objs = [memkc_solve(TopKInstance(f, k)).objective for k in range(1, k0 + 3)]
        assert objs == sorted(objs)
        assert len(set(objs[k0 - 1:])) == 1
