import itertools

import pytest
from hypothesis import given, settings, strategies as st

from topkmaxsat.core import CoverageError, Formula, TopKInstance, coverage, write_wcnf
from topkmaxsat.ee import VarMap, ee_decode, ee_encode, grow_to_maximal
from topkmaxsat.pms import solve_exact

from conftest import naive_cover, naive_topk, random_formula, truth_table


def test_two_var_golden(ex1):
    enc, vm = ee_encode(TopKInstance(ex1, 2))
    x = vm.expanded
    assert enc.hard == (
        (x(1, 1), x(2, 1)),
        (x(1, 2), x(2, 2)),
        (-x(1, 1), -x(2, 1)),
        (-x(1, 2), -x(2, 2)),
    )
    assert enc.soft == ((x(1, 1), x(1, 2)), (x(2, 1), x(2, 2)))
    assert enc.num_vars == 4


def test_k1_is_identity():
    for seed in range(10):
        f = random_formula(seed)
        enc, vm = ee_encode(TopKInstance(f, 1))
        assert enc == f
        assert all(vm.expanded(i, 1) == i for i in range(1, f.num_vars + 1))


def test_size_example():
    f = Formula(3, ((1, 2), (-3,)), ((1,), (2,), (3,), (-1, 2)))
    enc, _ = ee_encode(TopKInstance(f, 3))
    assert (enc.num_vars, enc.m, enc.m_soft) == (9, 6, 4)


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_size_law(seed, k):
    f = random_formula(seed)
    enc, _ = ee_encode(TopKInstance(f, k))
    assert (enc.num_vars, enc.m, enc.m_soft) == (k * f.num_vars, k * f.m, f.m_soft)


def test_varmap_bijection():
    vm = VarMap(5, 3)
    seen = {vm.expanded(i, j) for i in range(1, 6) for j in range(1, 4)}
    assert seen == set(range(1, 16))
    assert all(vm.expanded(*vm.original(e)) == e for e in seen)
    with pytest.raises(ValueError):
        vm.original(16)


def test_varmap_comment_roundtrip(ex1):
    enc, vm = ee_encode(TopKInstance(ex1, 2))
    text = write_wcnf(enc, vm.comments())
    assert "c eemap 1 2 3" in text
    assert VarMap.from_comments(text) == vm


def test_decode_two_var_optimal(ex1):
    _, vm = ee_encode(TopKInstance(ex1, 2))
    a = [False] * 4
    a[vm.expanded(1, 1) - 1] = True
    a[vm.expanded(2, 2) - 1] = True
    sol = ee_decode(a, vm, ex1)
    assert sol.models == ((True, False), (False, True))
    assert sol.covered == {1, 2} and sol.uncovered == 0


def test_decode_two_var_brute_force_optimum(ex1):
    # every one of the 16 expanded assignments: best decodable uncovered is 0
    enc, vm = ee_encode(TopKInstance(ex1, 2))
    best = min(
        ee_decode(a, vm, ex1).uncovered
        for a in itertools.product((False, True), repeat=4)
        if all(any((l > 0) == a[abs(l) - 1] for l in c) for c in enc.hard)
    )
    assert best == 0


def test_decode_duplicates_kept(ex1):
    _, vm = ee_encode(TopKInstance(ex1, 2))
    a = [False] * 4
    a[vm.expanded(1, 1) - 1] = True
    a[vm.expanded(1, 2) - 1] = True
    sol = ee_decode(a, vm, ex1)
    assert sol.models == ((True, False), (True, False))
    assert sol.distinct_models == 1
    assert sol.covered == {1} and sol.uncovered == 1


def test_decode_k1(ex1):
    _, vm = ee_encode(TopKInstance(ex1, 1))
    sol = ee_decode((False, True), vm, ex1)
    assert sol.models == ((False, True),) and sol.covered == {2}


def test_decode_rejects_hard_violation(ex1):
    _, vm = ee_encode(TopKInstance(ex1, 2))
    with pytest.raises(CoverageError):
        ee_decode((True, True, True, False), vm, ex1)


def test_grow_examples(ex1):
    f = Formula(2, ((1, 2),), ((1,), (2,)))
    grown = grow_to_maximal(f, (True, False))
    assert grown == (True, True) and coverage(f, grown) == {1, 2}
    assert grow_to_maximal(ex1, (True, False)) == (True, False)
    nosoft = Formula(2, ((1, 2),), ())
    assert grow_to_maximal(nosoft, (False, True)) == (False, True)


def _maximal_covers(f):
    covs = {naive_cover(f, a) for a in truth_table(f)}
    return {c for c in covs if not any(c < d for d in covs)}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_grow_is_maximal_and_idempotent(seed):
    f = random_formula(seed, n=3 + seed % 8)
    models = truth_table(f)
    maximal = _maximal_covers(f)
    for m in models[:20]:
        g = grow_to_maximal(f, m)
        cov = coverage(f, g)
        assert cov >= coverage(f, m)
        assert cov in maximal
        assert grow_to_maximal(f, g) == g


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_objective_equivalence(seed, k):
    f = random_formula(seed)
    expected = naive_topk(f, k)
    enc, vm = ee_encode(TopKInstance(f, k))
    res = solve_exact(enc)
    if expected is None:
        assert res.status == "unsat-hard"
        return
    assert f.m_soft - res.min_unsat == expected
    assert ee_decode(res.witness, vm, f).objective == expected
