import functools
import itertools

import pytest

from topkmaxsat.core import Formula
from topkmaxsat.gen import RandomInstanceParams, gen_random_instance

TWO_VAR_WCNF = "p wcnf 2 4 3\n3 1 2 0\n3 -1 -2 0\n1 1 0\n1 2 0\n"


@pytest.fixture
def ex1():
    return Formula(2, ((1, 2), (-1, -2)), ((1,), (2,)))


def naive_sat(clause, assignment):
    # literal scan without any package helpers
    for lit in clause:
        val = assignment[abs(lit) - 1]
        if (lit > 0 and val) or (lit < 0 and not val):
            return True
    return False


def truth_table(formula):
    """All total models by plain enumeration."""
    return [
        a for a in itertools.product((False, True), repeat=formula.num_vars)
        if all(naive_sat(c, a) for c in formula.hard)
    ]


def naive_cover(formula, a):
    return frozenset(i for i, c in enumerate(formula.soft, 1) if naive_sat(c, a))


@functools.lru_cache(maxsize=256)
def naive_maximal_covers(formula):
    covs = {naive_cover(formula, a) for a in truth_table(formula)}
    out = []
    for c in sorted(covs, key=len, reverse=True):
        if not any(c <= d for d in out):
            out.append(c)
    return out


def naive_topk(formula, k):
    """Exhaustive objective over <=k subsets of the set-maximal coverage sets; None if hard unsat.

    Dropping covers strictly contained in another cannot lower the best union.
    """
    covs = naive_maximal_covers(formula)
    if not covs:
        return None
    best = 0
    for r in range(1, min(k, len(covs)) + 1):
        for pick in itertools.combinations(covs, r):
            best = max(best, len(frozenset().union(*pick)))
    return best


def random_formula(seed, n=None, n_hard=None):
    n = n if n is not None else 3 + seed % 8
    n_hard = n_hard if n_hard is not None else (seed * 5) % (3 * n + 1)
    return gen_random_instance(RandomInstanceParams(n, n_hard, min(3, n), seed))
