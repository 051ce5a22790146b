"""Partial MaxSAT backends: SAT check, exact branch-and-bound, external solvers."""

from __future__ import annotations

import logging
import os
import shlex
import subprocess
import sys
import tempfile
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from ._trail import Trail
from .core import Clause, Formula, Model, lits_to_model, write_wcnf

log = logging.getLogger(__name__)

OPTIMUM = "optimum"
SUBOPTIMAL = "satisfiable-suboptimal"
UNSAT_HARD = "unsat-hard"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class SolverResult:
    status: str
    min_unsat: Optional[int] = None
    witness: Optional[Model] = None
    error: Optional[str] = None
    time_s: float = 0.0
    nodes: int = 0


class BudgetExceeded(Exception):
    pass


@contextmanager
def deep_recursion(depth: int):
    old = sys.getrecursionlimit()
    need = 2 * depth + 1000
    if need > old:
        sys.setrecursionlimit(need)
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def sat_check(hard: Iterable[Sequence[int]], num_vars: int) -> Optional[Model]:
    """A total model of ``hard`` or None; unconstrained variables come out true."""
    trail = Trail(num_vars, hard)
    if not trail.propagate_initial():
        return None

    def search() -> bool:
        if trail.open_hard == 0:
            return True
        var = trail.pick_branch_var()
        for lit in (var, -var):
            mark = trail.mark()
            if trail.assign(lit) and search():
                return True
            trail.undo(mark)
        return False

    with deep_recursion(num_vars):
        if not search():
            return None
    return tuple(v >= 0 for v in trail.snapshot())


def solve_exact(
    formula: Formula,
    node_limit: Optional[int] = None,
    time_limit: Optional[float] = None,
    upper_bound: Optional[int] = None,
) -> SolverResult:
    """Minimum number of falsified soft clauses by DPLL branch-and-bound.

    Prunes whenever the soft clauses already falsified reach the incumbent.
    ``upper_bound`` (a known achievable count) seeds the incumbent; the
    result then reports the optimum only if it finds a witness for it.
    """
    start = time.perf_counter()
    n = formula.num_vars
    trail = Trail(n, formula.hard, formula.soft)
    if not trail.propagate_initial():
        return SolverResult(UNSAT_HARD, time_s=time.perf_counter() - start)

    best = [formula.m_soft + 1 if upper_bound is None else upper_bound + 1]
    best_model: list[Optional[Model]] = [None]
    nodes = [0]
    deadline = None if time_limit is None else start + time_limit
    soft_score = trail.soft_score
    value = trail.value

    def record():
        best[0] = trail.soft_falsified
        best_model[0] = tuple(v >= 0 for v in trail.snapshot())

    def pick() -> int:
        var = trail.pick_branch_var()
        if var:
            return var
        # hard part satisfied: branch on variables still in open soft clauses
        top = 0
        for v in range(1, n + 1):
            if value[v] == 0:
                s = soft_score[v + n] + soft_score[n - v]
                if s > top:
                    var, top = v, s
        return var

    def search():
        nodes[0] += 1
        if node_limit is not None and nodes[0] > node_limit:
            raise BudgetExceeded
        if deadline is not None and nodes[0] % 256 == 0 and time.perf_counter() > deadline:
            raise BudgetExceeded
        if trail.soft_falsified >= best[0]:
            return
        var = pick()
        if not var:
            record()
            return
        first = var if soft_score[var + n] >= soft_score[n - var] else -var
        for lit in (first, -first):
            mark = trail.mark()
            if trail.assign(lit):
                search()
            trail.undo(mark)
            if best[0] == 0:
                return

    try:
        with deep_recursion(n):
            search()
    except BudgetExceeded:
        elapsed = time.perf_counter() - start
        if best_model[0] is not None:
            return SolverResult(SUBOPTIMAL, best[0], best_model[0], "budget exceeded", elapsed, nodes[0])
        return SolverResult(UNKNOWN, None, None, "budget exceeded", elapsed, nodes[0])
    elapsed = time.perf_counter() - start
    if best_model[0] is None:
        if upper_bound is not None:
            return SolverResult(UNKNOWN, None, None, "no witness within upper bound", elapsed, nodes[0])
        return SolverResult(UNSAT_HARD, time_s=elapsed, nodes=nodes[0])
    return SolverResult(OPTIMUM, best[0], best_model[0], None, elapsed, nodes[0])


def verify_witness(formula: Formula, witness: Sequence[bool], claimed: Optional[int]) -> Optional[str]:
    """None when the witness satisfies every hard clause and matches ``claimed``; else the reason."""
    bad = formula.hard_violation(witness)
    if bad is not None:
        return f"witness violates hard clause {bad}"
    unsat = formula.unsat_soft(witness)
    if claimed is not None and unsat != claimed:
        return f"witness falsifies {unsat} soft clauses, solver claimed {claimed}"
    return None


def _parse_v_line(toks: list[str], num_vars: int) -> list[int]:
    # both "v -1 2 0" and the newer "v 0110" bit-string form
    if len(toks) == 1 and set(toks[0]) <= {"0", "1"} and toks[0] != "0":
        return [i if b == "1" else -i for i, b in enumerate(toks[0], 1)]
    return [int(t) for t in toks if t != "0"]


def parse_solver_output(text: str, formula: Formula, timed_out: bool = False) -> SolverResult:
    """Interpret MaxSAT-evaluation style output (``c``/``o``/``s``/``v`` lines)."""
    status_line = None
    last_o = None
    vlits: list[int] = []
    saw_v = False
    try:
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            tag, _, rest = line.partition(" ")
            if tag == "s":
                status_line = rest.strip().upper()
            elif tag == "o":
                last_o = int(rest.split()[0])
            elif tag == "v":
                saw_v = True
                vlits.extend(_parse_v_line(rest.split(), formula.num_vars))
    except (ValueError, IndexError) as exc:
        return SolverResult(UNKNOWN, error=f"unparsable solver output: {exc}")

    witness = lits_to_model(vlits, formula.num_vars) if saw_v else None
    if status_line is None:
        why = "timeout" if timed_out else "no status line"
        return SolverResult(UNKNOWN, last_o, None, why)
    if status_line == "UNSATISFIABLE":
        return SolverResult(UNSAT_HARD)
    if status_line in ("OPTIMUM FOUND", "SATISFIABLE"):
        status = OPTIMUM if status_line == "OPTIMUM FOUND" else SUBOPTIMAL
        if witness is None:
            return SolverResult(UNKNOWN, last_o, None, "no witness to verify")
        claimed = last_o if last_o is not None else formula.unsat_soft(witness)
        err = verify_witness(formula, witness, claimed)
        if err is not None:
            log.warning("rejecting external witness: %s", err)
            return SolverResult(UNKNOWN, None, None, err)
        return SolverResult(status, claimed, witness)
    return SolverResult(UNKNOWN, last_o, None, f"unrecognized status {status_line!r}")


def external_solve(
    formula: Formula,
    command: Union[str, Sequence[str]],
    time_limit: Optional[float] = None,
) -> SolverResult:
    """Run an external MaxSAT solver on ``formula``.

    ``command`` is an argv template (string or list); ``{wcnf}`` is replaced
    by the temporary instance path, or the path is appended when absent.
    The exit code is ignored in favour of the ``s`` line.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    fd, path = tempfile.mkstemp(suffix=".wcnf", prefix="topk-")
    start = time.perf_counter()
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(write_wcnf(formula))
        if any("{wcnf}" in a for a in argv):
            argv = [a.replace("{wcnf}", path) for a in argv]
        else:
            argv.append(path)
        timed_out = False
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=time_limit)
            out = proc.stdout
        except subprocess.TimeoutExpired as exc:
            timed_out = True
            out = exc.stdout or ""
            if isinstance(out, bytes):
                out = out.decode(errors="replace")
        except OSError as exc:
            return SolverResult(UNKNOWN, error=f"cannot run solver: {exc}", time_s=time.perf_counter() - start)
        res = parse_solver_output(out, formula, timed_out=timed_out)
        if timed_out and res.status == OPTIMUM:
            res = SolverResult(SUBOPTIMAL, res.min_unsat, res.witness, "timeout")
        return SolverResult(res.status, res.min_unsat, res.witness, res.error, time.perf_counter() - start)
    finally:
        os.unlink(path)
