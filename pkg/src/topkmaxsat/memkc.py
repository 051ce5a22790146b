"""Exact top-k solving by model enumeration followed by Max-k-Cover.

All models of the hard clauses are enumerated by a DPLL-style split, each
model is reduced to the bitset of soft clauses it satisfies, and a
branch-and-bound over include/exclude decisions picks at most ``k`` of
them maximizing the size of the union.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from ._trail import Trail
from .core import Clause, Formula, Model, TopKInstance, TopKSolution, coverage_mask
from .ee import grow_to_maximal
from .pms import deep_recursion

DEFAULT_MODEL_CAP = 10**6


class SolveTimeout(RuntimeError):
    pass


def _deadline_check(time_limit: Optional[float]):
    if time_limit is None:
        return lambda: None
    end = time.perf_counter() + time_limit
    calls = [0]

    def check():
        calls[0] += 1
        if calls[0] % 512 == 0 and time.perf_counter() > end:
            raise SolveTimeout(f"time limit {time_limit}s exceeded")

    return check


class EnumerationOverflow(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"enumeration overflow: more than {cap} models (cap={cap})")


def _iter_models(
    hard: Sequence[Clause],
    num_vars: int,
    partial: Optional[dict[int, bool]],
    expand: set[int],
    tick=lambda: None,
) -> Iterator[Model]:
    trail = Trail(num_vars, hard)
    if not trail.propagate_initial():
        return
    for var, val in sorted((partial or {}).items()):
        if not trail.assign(var if val else -var):
            return

    def complete() -> Iterator[Model]:
        free = [v for v in trail.unassigned() if v in expand]
        base = [v >= 0 for v in trail.snapshot()]
        for bits in itertools.product((True, False), repeat=len(free)):
            for v, b in zip(free, bits):
                base[v - 1] = b
            yield tuple(base)

    def split() -> Iterator[Model]:
        tick()
        if trail.open_hard == 0:
            yield from complete()
            return
        var = trail.pick_branch_var()
        for lit in (var, -var):
            mark = trail.mark()
            if trail.assign(lit):
                yield from split()
            trail.undo(mark)

    yield from split()


def me_enumerate(
    hard: Sequence[Clause],
    num_vars: int,
    partial: Optional[dict[int, bool]] = None,
    soft: Sequence[Clause] = (),
    cap: Optional[int] = DEFAULT_MODEL_CAP,
    time_limit: Optional[float] = None,
) -> list[Model]:
    """Every total model of ``hard`` extending ``partial``.

    Unit clauses are propagated exhaustively and the remaining formula is
    split on its most frequent variable, true branch first.  Once every hard
    clause is satisfied, leftover variables that occur in some clause are
    expanded both ways; variables occurring nowhere are fixed to true.
    """
    used = {abs(lit) for clause in (*hard, *soft) for lit in clause}
    out: list[Model] = []
    with deep_recursion(num_vars):
        for model in _iter_models(hard, num_vars, partial, used, _deadline_check(time_limit)):
            out.append(model)
            if cap is not None and len(out) > cap:
                raise EnumerationOverflow(cap)
    return out


@dataclass
class MKCResult:
    best_count: int
    chosen: list[int]  # indices into the candidate list
    nodes: int = 0


def remove_dominated(masks: Sequence[int]) -> list[int]:
    """Indices of the set-maximal masks; among equal masks only the first survives."""
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), i))
    kept: list[int] = []
    for i in order:
        m = masks[i]
        if not any(m & ~masks[j] == 0 for j in kept):
            kept.append(i)
    return sorted(kept)


def mkc_masks(
    masks: Sequence[int],
    k: int,
    committed: int = 0,
    bound: bool = True,
    time_limit: Optional[float] = None,
) -> MKCResult:
    """Pick at most ``k`` masks maximizing the popcount of their union with ``committed``.

    ``best_count`` counts only what the picked masks add beyond
    ``committed``.  Candidates are tried in the given order, include
    before exclude.  With ``bound`` a branch is cut when its count plus
    the ``k'`` largest residual gains cannot beat the incumbent.
    """
    n = len(masks)
    best = [0, []]
    nodes = [0]
    full = 0
    for m in masks:
        full |= m
    full &= ~committed
    full_count = full.bit_count()
    tick = _deadline_check(time_limit)

    def rec(i: int, left: int, covered: int, gained: int, picked: list[int]):
        nodes[0] += 1
        tick()
        if gained > best[0]:
            best[0], best[1] = gained, list(picked)
        if left == 0 or i == n or best[0] == full_count:
            return
        if bound:
            gains = sorted(
                ((masks[j] & ~covered).bit_count() for j in range(i, n)), reverse=True
            )
            if gained + sum(gains[:left]) <= best[0]:
                return
        m = masks[i]
        add = (m & ~covered).bit_count()
        if add:
            picked.append(i)
            rec(i + 1, left - 1, covered | m, gained + add, picked)
            picked.pop()
        rec(i + 1, left, covered, gained, picked)

    if k > 0 and n:
        with deep_recursion(n):
            rec(0, k, committed, 0, [])
    return MKCResult(best[0], best[1], nodes[0])


def memkc_solve(
    inst: TopKInstance,
    cap: Optional[int] = DEFAULT_MODEL_CAP,
    prune_dominated: bool = True,
    maximalize: bool = True,
    time_limit: Optional[float] = None,
) -> TopKSolution:
    """Optimal top-k solution; raises ``SolveTimeout`` or ``EnumerationOverflow``."""
    f, k = inst.formula, inst.k
    start = time.perf_counter()
    models = me_enumerate(f.hard, f.num_vars, soft=f.soft, cap=cap, time_limit=time_limit)
    if not models:
        return TopKSolution.infeasible(f, k)

    # one representative model per distinct coverage set
    first: dict[int, int] = {}
    for idx, model in enumerate(models):
        first.setdefault(coverage_mask(f, model), idx)
    masks = list(first)
    reps = [models[first[m]] for m in masks]
    if prune_dominated:
        keep = remove_dominated(masks)
        masks = [masks[i] for i in keep]
        reps = [reps[i] for i in keep]
    order = sorted(range(len(masks)), key=lambda i: (-masks[i].bit_count(), [not b for b in reps[i]]))
    masks = [masks[i] for i in order]
    reps = [reps[i] for i in order]

    left = None if time_limit is None else max(0.0, time_limit - (time.perf_counter() - start))
    res = mkc_masks(masks, k, time_limit=left)
    # an empty pick only happens when nothing is coverable; still report a model
    chosen = [reps[i] for i in res.chosen] or [reps[0]]
    if maximalize:
        chosen = [grow_to_maximal(f, m) for m in chosen]
    sol = TopKSolution.from_models(f, k, chosen, "optimal")
    if sol.objective != res.best_count:
        raise RuntimeError(f"coverage {sol.objective} disagrees with search count {res.best_count}")
    return sol


def mkc(
    formula: Formula,
    models: Sequence[Model],
    k: int,
    selected: Iterable[Model] = (),
) -> tuple[int, list[Model]]:
    """Max-k-Cover over concrete models.

    Returns how many soft clauses beyond those already satisfied by
    ``selected`` the best choice of at most ``k`` models adds, and that choice.
    """
    committed = 0
    for m in selected:
        committed |= coverage_mask(formula, m)
    masks = [coverage_mask(formula, m) for m in models]
    res = mkc_masks(masks, k, committed)
    return res.best_count, [models[i] for i in res.chosen]
