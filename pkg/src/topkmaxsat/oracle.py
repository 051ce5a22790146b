"""Brute-force reference answers for small formulas (all 2^n assignments)."""

from __future__ import annotations

import itertools
from typing import Iterator

from .core import Formula, Model, TopKInstance, TopKSolution

DEFAULT_CAP = 20


class OracleCapError(ValueError):
    pass


def _clause_masks(clause) -> tuple[int, int]:
    pos = neg = 0
    for lit in clause:
        if lit > 0:
            pos |= 1 << (lit - 1)
        else:
            neg |= 1 << (-lit - 1)
    return pos, neg


def _models(formula: Formula, cap: int) -> Iterator[tuple[int, int]]:
    """Yield ``(assignment bits, coverage bits)`` for every model."""
    n = formula.num_vars
    if n > cap:
        raise OracleCapError(f"{n} variables exceed oracle cap {cap}")
    full = (1 << n) - 1
    hard = [_clause_masks(c) for c in formula.hard]
    soft = [_clause_masks(c) for c in formula.soft]
    for a in range(1 << n):
        na = full & ~a
        if all((a & p) or (na & q) for p, q in hard):
            cov = 0
            for i, (p, q) in enumerate(soft):
                if (a & p) or (na & q):
                    cov |= 1 << i
            yield a, cov


def _bits_to_model(a: int, n: int) -> Model:
    return tuple(bool(a >> i & 1) for i in range(n))


def all_models(formula: Formula, cap: int = DEFAULT_CAP) -> list[Model]:
    return [_bits_to_model(a, formula.num_vars) for a, _ in _models(formula, cap)]


def _maximal(formula: Formula, cap: int) -> list[tuple[int, int]]:
    """``(coverage, first model)`` for every set-maximal coverage, sorted by coverage indices."""
    first: dict[int, int] = {}
    for a, cov in _models(formula, cap):
        first.setdefault(cov, a)
    covs = list(first)
    maximal = [c for c in covs if not any(c != d and c & ~d == 0 for d in covs)]
    maximal.sort(key=lambda c: [i for i in range(formula.m_soft) if c >> i & 1])
    return [(c, first[c]) for c in maximal]


def brute_coverage_sets(formula: Formula, cap: int = DEFAULT_CAP) -> list[frozenset[int]]:
    """Distinct set-maximal coverage sets over all models, lexicographically ordered."""
    return [
        frozenset(i + 1 for i in range(formula.m_soft) if c >> i & 1)
        for c, _ in _maximal(formula, cap)
    ]


def brute_topk(inst: TopKInstance, cap: int = DEFAULT_CAP) -> TopKSolution:
    f, k = inst.formula, inst.k
    maximal = _maximal(f, cap)
    if not maximal:
        return TopKSolution.infeasible(f, k)
    best, best_pick = -1, ()
    for pick in itertools.combinations(range(len(maximal)), min(k, len(maximal))):
        union = 0
        for i in pick:
            union |= maximal[i][0]
        count = union.bit_count()
        if count > best:
            best, best_pick = count, pick
    models = [_bits_to_model(maximal[i][1], f.num_vars) for i in best_pick]
    return TopKSolution.from_models(f, k, models, "optimal")


def brute_min_unsat(formula: Formula, cap: int = DEFAULT_CAP) -> int | None:
    """Exact partial MaxSAT optimum (falsified soft count); None if the hard part is unsat."""
    best = None
    for _, cov in _models(formula, cap):
        u = formula.m_soft - cov.bit_count()
        if best is None or u < best:
            best = u
    return best
