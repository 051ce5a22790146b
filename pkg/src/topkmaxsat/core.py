"""Formula data model, clause evaluation, conditioning and WCNF I/O.

Literals are DIMACS-style signed integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its negation.  A clause is a tuple of literals, a
model is a tuple of booleans where ``model[v - 1]`` is the value of ``v``.
Soft clauses are identified by their 1-based position in ``Formula.soft``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

log = logging.getLogger(__name__)

Clause = tuple[int, ...]
Model = tuple[bool, ...]

STATUSES = ("optimal", "feasible", "infeasible-hard", "unknown")


class WCNFError(ValueError):
    """Malformed WCNF input; ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, msg: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)


class CoverageError(ValueError):
    """A model violates a hard clause."""

    def __init__(self, clause_index: int, clause: Clause):
        self.clause_index = clause_index
        self.clause = clause
        super().__init__(f"model violates hard clause {clause_index}: {list(clause)}")


def make_clause(lits: Iterable[int]) -> Optional[Clause]:
    """Deduplicate literals keeping first occurrence; None for a tautology."""
    seen: dict[int, None] = {}
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal")
        if -lit in seen:
            return None
        seen[lit] = None
    return tuple(seen)


@dataclass(frozen=True)
class Formula:
    """Unweighted partial MaxSAT formula over variables ``1..num_vars``."""

    num_vars: int
    hard: tuple[Clause, ...] = ()
    soft: tuple[Clause, ...] = ()
    dropped_tautologies: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        for kind, clauses in (("hard", self.hard), ("soft", self.soft)):
            for i, clause in enumerate(clauses, 1):
                for lit in clause:
                    if lit == 0 or abs(lit) > self.num_vars:
                        raise ValueError(
                            f"{kind} clause {i}: literal {lit} outside 1..{self.num_vars}"
                        )

    @classmethod
    def build(
        cls,
        num_vars: int,
        hard: Iterable[Iterable[int]] = (),
        soft: Iterable[Iterable[int]] = (),
    ) -> "Formula":
        """Normalize clauses: dedupe literals, drop tautologies (with a warning)."""
        dropped = 0
        out: list[list[Clause]] = [[], []]
        for bucket, clauses in zip(out, (hard, soft)):
            for lits in clauses:
                clause = make_clause(lits)
                if clause is None:
                    dropped += 1
                else:
                    bucket.append(clause)
        if dropped:
            log.warning("dropped %d tautological clause(s)", dropped)
        return cls(num_vars, tuple(out[0]), tuple(out[1]), dropped)

    @property
    def m(self) -> int:
        return len(self.hard)

    @property
    def m_soft(self) -> int:
        return len(self.soft)

    def hard_violation(self, model: Sequence[bool]) -> Optional[int]:
        """1-based index of the first violated hard clause, or None."""
        for i, clause in enumerate(self.hard, 1):
            if not clause_satisfied(clause, model):
                return i
        return None

    def is_model(self, model: Sequence[bool]) -> bool:
        return len(model) == self.num_vars and self.hard_violation(model) is None

    def unsat_soft(self, model: Sequence[bool]) -> int:
        return sum(1 for c in self.soft if not clause_satisfied(c, model))


def lit_value(lit: int, model: Sequence[bool]) -> bool:
    v = model[abs(lit) - 1]
    return v if lit > 0 else not v


def clause_satisfied(clause: Clause, model: Sequence[bool]) -> bool:
    return any(lit_value(lit, model) for lit in clause)


def condition(clauses: Iterable[Clause], lit: int) -> list[Clause]:
    """Simplify ``clauses`` under ``lit = true``.

    Clauses containing ``lit`` disappear and ``-lit`` is deleted from the
    rest, which can leave empty (falsified) clauses behind.
    """
    out = []
    for clause in clauses:
        if lit in clause:
            continue
        out.append(tuple(x for x in clause if x != -lit))
    return out


def coverage(formula: Formula, model: Sequence[bool]) -> frozenset[int]:
    """Indices (1-based) of the soft clauses satisfied by a model."""
    if len(model) != formula.num_vars:
        raise ValueError(f"model has {len(model)} values, formula has {formula.num_vars} variables")
    bad = formula.hard_violation(model)
    if bad is not None:
        raise CoverageError(bad, formula.hard[bad - 1])
    return frozenset(
        i for i, clause in enumerate(formula.soft, 1) if clause_satisfied(clause, model)
    )


def coverage_mask(formula: Formula, model: Sequence[bool]) -> int:
    """Bitset form of the soft coverage (bit ``i - 1`` for soft clause ``i``); no hard check."""
    mask = 0
    for i, clause in enumerate(formula.soft):
        if clause_satisfied(clause, model):
            mask |= 1 << i
    return mask


def model_to_lits(model: Sequence[bool]) -> list[int]:
    return [v if val else -v for v, val in enumerate(model, 1)]


def lits_to_model(lits: Iterable[int], num_vars: int) -> Model:
    """Unmentioned variables default to false."""
    vals = [False] * num_vars
    for lit in lits:
        if lit and abs(lit) <= num_vars:
            vals[abs(lit) - 1] = lit > 0
    return tuple(vals)


@dataclass(frozen=True)
class TopKInstance:
    formula: Formula
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")


@dataclass(frozen=True)
class TopKSolution:
    """A set of at most k models and the union of their soft coverage."""

    k: int
    models: tuple[Model, ...]
    covered: frozenset[int]
    m_soft: int
    status: str

    @property
    def objective(self) -> int:
        return len(self.covered)

    @property
    def uncovered(self) -> int:
        return self.m_soft - len(self.covered)

    @property
    def distinct_models(self) -> int:
        return len(set(self.models))

    @classmethod
    def from_models(
        cls, formula: Formula, k: int, models: Iterable[Sequence[bool]], status: str
    ) -> "TopKSolution":
        """Recompute coverage from scratch; raises CoverageError on a bad model."""
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        models = tuple(tuple(bool(x) for x in m) for m in models)
        if len(models) > k:
            raise ValueError(f"{len(models)} models exceed k={k}")
        if status == "infeasible-hard" and models:
            raise ValueError("infeasible-hard solution cannot carry models")
        covered: frozenset[int] = frozenset()
        for model in models:
            covered |= coverage(formula, model)
        return cls(k, models, covered, formula.m_soft, status)

    @classmethod
    def infeasible(cls, formula: Formula, k: int) -> "TopKSolution":
        return cls(k, (), frozenset(), formula.m_soft, "infeasible-hard")

    def verify(self, formula: Formula) -> bool:
        """Re-derive coverage from the models and compare with what is stored."""
        try:
            again = TopKSolution.from_models(formula, self.k, self.models, self.status)
        except (CoverageError, ValueError):
            return False
        return again.covered == self.covered and self.m_soft == formula.m_soft


def parse_wcnf(text: str) -> Formula:
    """Parse DIMACS WCNF text: weight ``top`` marks a hard clause, weight 1 a soft one."""
    header = None
    hard: list[list[int]] = []
    soft: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise WCNFError("duplicate header", lineno)
            if len(toks) != 5 or toks[1] != "wcnf":
                raise WCNFError(f"malformed header {line!r}", lineno)
            try:
                nvars, ncls, top = (int(t) for t in toks[2:])
            except ValueError:
                raise WCNFError(f"malformed header {line!r}", lineno) from None
            if nvars < 0 or ncls < 0 or top < 1:
                raise WCNFError(f"malformed header {line!r}", lineno)
            header = (nvars, ncls, top)
            continue
        if header is None:
            raise WCNFError("clause before header", lineno)
        nvars, _, top = header
        try:
            nums = [int(t) for t in toks]
        except ValueError:
            raise WCNFError(f"non-integer token in {line!r}", lineno) from None
        if len(nums) < 2 or nums[-1] != 0:
            raise WCNFError("missing 0 terminator", lineno)
        weight, lits = nums[0], nums[1:-1]
        if 0 in lits:
            raise WCNFError("0 inside clause", lineno)
        for lit in lits:
            if abs(lit) > nvars:
                raise WCNFError(f"literal {lit} exceeds variable count {nvars}", lineno)
        if weight == top:
            hard.append(lits)
        elif weight == 1:
            soft.append(lits)
        else:
            raise WCNFError(f"weight {weight} neither 1 nor top ({top})", lineno)
    if header is None:
        raise WCNFError("missing header")
    nvars, ncls, _ = header
    if len(hard) + len(soft) != ncls:
        raise WCNFError(f"header declares {ncls} clauses, found {len(hard) + len(soft)}")
    return Formula.build(nvars, hard, soft)


def write_wcnf(formula: Formula, comments: Iterable[str] = ()) -> str:
    """Canonical WCNF: comments, header, hard clauses, then soft clauses."""
    top = formula.m_soft + 1
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p wcnf {formula.num_vars} {formula.m + formula.m_soft} {top}")
    for clause in formula.hard:
        lines.append(" ".join(map(str, (top, *clause, 0))))
    for clause in formula.soft:
        lines.append(" ".join(map(str, (1, *clause, 0))))
    return "\n".join(lines) + "\n"
