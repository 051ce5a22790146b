import pytest

from topkmaxsat.core import Formula, TopKInstance
from topkmaxsat.oracle import OracleCapError, brute_coverage_sets, brute_min_unsat, brute_topk
from topkmaxsat.pms import solve_exact

from conftest import naive_topk, random_formula


def test_examples(ex1):
    assert brute_topk(TopKInstance(ex1, 2)).objective == 2
    assert brute_topk(TopKInstance(ex1, 50)).objective == 2
    bad = Formula(1, ((1,), (-1,)), ((1,),))
    sol = brute_topk(TopKInstance(bad, 2))
    assert sol.status == "infeasible-hard" and sol.objective == 0


def test_coverage_sets(ex1):
    assert brute_coverage_sets(ex1) == [frozenset({1}), frozenset({2})]
    assert brute_coverage_sets(Formula(1, (), ((1,),))) == [frozenset({1})]


def test_cap():
    with pytest.raises(OracleCapError):
        brute_topk(TopKInstance(Formula(21), 1))
    with pytest.raises(OracleCapError):
        brute_coverage_sets(Formula(5), cap=4)


def test_k1_matches_exact_maxsat():
    for seed in range(40):
        f = random_formula(seed)
        mu = solve_exact(f).min_unsat
        if mu is None:
            continue
        assert brute_topk(TopKInstance(f, 1)).objective == f.m_soft - mu == f.m_soft - brute_min_unsat(f)


def test_agrees_with_naive_and_saturates():
    for seed in range(40):
        f = random_formula(seed)
        k0 = len(brute_coverage_sets(f))
        objs = [brute_topk(TopKInstance(f, k)).objective for k in range(1, 5)]
        assert objs == [naive_topk(f, k) or 0 for k in range(1, 5)]
        if k0:
            assert brute_topk(TopKInstance(f, k0)).objective == brute_topk(TopKInstance(f, k0 + 3)).objective


def test_witness_models_are_maximal(ex1):
    sol = brute_topk(TopKInstance(ex1, 2))
    assert sorted(sol.models) == [(False, True), (True, False)]
