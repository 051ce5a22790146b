"""Expanding encoding of a top-k instance into plain partial MaxSAT.

Each variable ``x_i`` gets ``k`` copies ``x_i1 .. x_ik``; every hard clause
is copied once per block and every soft clause becomes the disjunction of
its ``k`` copies.  Copies are numbered block by block: copy ``j`` of
variable ``i`` is ``(j - 1) * n + i``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core import Formula, Model, TopKInstance, TopKSolution, clause_satisfied, coverage
from .pms import sat_check

SatCheck = Callable[[list, int], Optional[Model]]


@dataclass(frozen=True)
class VarMap:
    n: int
    k: int

    def expanded(self, var: int, copy: int) -> int:
        if not (1 <= var <= self.n and 1 <= copy <= self.k):
            raise ValueError(f"({var}, {copy}) outside {self.n}x{self.k}")
        return (copy - 1) * self.n + var

    def original(self, expanded: int) -> tuple[int, int]:
        """Inverse of ``expanded``: ``(var, copy)``."""
        if not 1 <= expanded <= self.n * self.k:
            raise ValueError(f"expanded variable {expanded} outside 1..{self.n * self.k}")
        copy, var = divmod(expanded - 1, self.n)
        return var + 1, copy + 1

    def lit(self, lit: int, copy: int) -> int:
        e = self.expanded(abs(lit), copy)
        return e if lit > 0 else -e

    def comments(self) -> list[str]:
        return [
            f"eemap {i} {j} {self.expanded(i, j)}"
            for j in range(1, self.k + 1)
            for i in range(1, self.n + 1)
        ]

    @classmethod
    def from_comments(cls, text: str) -> "VarMap":
        """Rebuild from the ``c eemap <orig> <copy> <expanded>`` lines of a WCNF file."""
        triples = [
            tuple(int(x) for x in m.groups())
            for m in re.finditer(r"^c eemap (\d+) (\d+) (\d+)\s*$", text, re.M)
        ]
        if not triples:
            raise ValueError("no eemap comments found")
        n = max(t[0] for t in triples)
        k = max(t[1] for t in triples)
        vm = cls(n, k)
        if len(triples) != n * k or any(vm.expanded(i, j) != e for i, j, e in triples):
            raise ValueError("eemap comments do not describe a block-major map")
        return vm


def ee_encode(inst: TopKInstance) -> tuple[Formula, VarMap]:
    f, k = inst.formula, inst.k
    vm = VarMap(f.num_vars, k)
    hard = tuple(
        tuple(vm.lit(lit, j) for lit in clause)
        for clause in f.hard
        for j in range(1, k + 1)
    )
    soft = tuple(
        tuple(vm.lit(lit, j) for j in range(1, k + 1) for lit in clause)
        for clause in f.soft
    )
    return Formula(f.num_vars * k, hard, soft), vm


def split_assignment(a: Sequence[bool], vm: VarMap) -> list[Model]:
    return [
        tuple(bool(a[vm.expanded(i, j) - 1]) for i in range(1, vm.n + 1))
        for j in range(1, vm.k + 1)
    ]


def ee_decode(
    a: Sequence[bool],
    vm: VarMap,
    formula: Formula,
    status: str = "optimal",
) -> TopKSolution:
    """Split an expanded assignment into ``k`` models of the original formula.

    Duplicate models are kept; coverage is their set union.  Raises
    ``CoverageError`` if some block violates an original hard clause.
    """
    if len(a) != vm.n * vm.k:
        raise ValueError(f"assignment has {len(a)} values, expected {vm.n * vm.k}")
    return TopKSolution.from_models(formula, vm.k, split_assignment(a, vm), status)


def grow_to_maximal(
    formula: Formula,
    model: Sequence[bool],
    sat: SatCheck = sat_check,
) -> Model:
    """Extend a model's coverage until it satisfies a maximal satisfiable subset.

    Soft clauses are tried in index order; each one that the current model
    misses is committed when hard + committed + it is still satisfiable, and
    the witness becomes the current model.
    """
    model = tuple(bool(x) for x in model)
    committed = [formula.soft[i - 1] for i in sorted(coverage(formula, model))]
    for clause in formula.soft:
        if clause_satisfied(clause, model):
            continue
        witness = sat([*formula.hard, *committed, clause], formula.num_vars)
        if witness is not None:
            committed.append(clause)
            model = witness
    return model


def maximalize(formula: Formula, sol: TopKSolution, sat: SatCheck = sat_check) -> TopKSolution:
    if not sol.models:
        return sol
    grown = [grow_to_maximal(formula, m, sat) for m in sol.models]
    return TopKSolution.from_models(formula, sol.k, grown, sol.status)

