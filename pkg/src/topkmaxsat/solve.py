"""One entry point over the three solving routes, plus problem loading."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import apps
from .core import Formula, TopKInstance, TopKSolution, model_to_lits, parse_wcnf
from .ee import ee_decode, ee_encode, maximalize as maximalize_solution
from .memkc import DEFAULT_MODEL_CAP, SolveTimeout, memkc_solve
from .pms import OPTIMUM, SUBOPTIMAL, UNSAT_HARD, external_solve, solve_exact

METHODS = ("memkc", "ee-internal", "ee-external")
SOLVER_ENV = "TOPKMAXSAT_SOLVER"


@dataclass
class Problem:
    """A top-k instance plus whatever is needed to decode it back to its source."""

    kind: str  # wcnf | graph | ca
    formula: Formula
    graph: Optional[apps.Graph] = None
    ca: Optional[apps.CoveringArraySpec] = None

    def instance(self, k: int) -> TopKInstance:
        return TopKInstance(self.formula, k)

    def decode(self, sol: TopKSolution) -> Optional[dict[str, Any]]:
        if not sol.models:
            return None
        if self.graph is not None:
            return {"cliques": [sorted(c) for c in apps.decode_clique(sol, self.graph)]}
        if self.ca is not None:
            return {"rows": [list(r) for r in apps.decode_ca(sol, self.ca)]}
        return None


def load_problem(text: str, kind: str = "wcnf") -> Problem:
    if kind == "wcnf":
        return Problem(kind, parse_wcnf(text))
    if kind == "graph":
        g = apps.parse_dimacs_graph(text)
        return Problem(kind, apps.encode_clique(g, 1).formula, graph=g)
    if kind == "ca":
        spec = apps.parse_ca_spec(text)
        return Problem(kind, apps.encode_ca(spec, 1).formula, ca=spec)
    raise ValueError(f"unknown input kind {kind!r}")


def load_problem_file(path: str | os.PathLike, kind: str = "wcnf") -> Problem:
    return load_problem(Path(path).read_text(), kind)


@dataclass
class Outcome:
    solution: TopKSolution
    time_s: float
    note: Optional[str] = None
    extra: dict = field(default_factory=dict)


def solve_topk(
    problem: Problem,
    k: int,
    method: str = "memkc",
    maximalize: bool = True,
    time_limit: Optional[float] = None,
    solver_cmd: Optional[str] = None,
    cap: Optional[int] = DEFAULT_MODEL_CAP,
) -> Outcome:
    """Solve with ``method``; timeouts come back as status ``unknown`` rather than raising."""
    inst = problem.instance(k)
    f = problem.formula
    start = time.perf_counter()
    if method == "memkc":
        try:
            sol = memkc_solve(inst, cap=cap, maximalize=maximalize, time_limit=time_limit)
        except SolveTimeout as exc:
            return Outcome(TopKSolution(k, (), frozenset(), f.m_soft, "unknown"), time.perf_counter() - start, str(exc))
        return Outcome(sol, time.perf_counter() - start)

    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    expanded, vm = ee_encode(inst)
    if method == "ee-internal":
        res = solve_exact(expanded, time_limit=time_limit)
    else:
        cmd = solver_cmd or os.environ.get(SOLVER_ENV)
        if not cmd:
            raise ValueError(f"ee-external needs --solver-cmd or ${SOLVER_ENV}")
        res = external_solve(expanded, cmd, time_limit)
    elapsed_solver = res.time_s
    if res.status == UNSAT_HARD:
        sol = TopKSolution.infeasible(f, k)
    elif res.status in (OPTIMUM, SUBOPTIMAL) and res.witness is not None:
        status = "optimal" if res.status == OPTIMUM else "feasible"
        sol = ee_decode(res.witness, vm, f, status)
        if sol.uncovered != res.min_unsat:
            raise RuntimeError(f"decoded uncovered {sol.uncovered} != solver {res.min_unsat}")
        if maximalize:
            sol = maximalize_solution(f, sol)
    else:
        sol = TopKSolution(k, (), frozenset(), f.m_soft, "unknown")
    return Outcome(sol, time.perf_counter() - start, res.error, {"solver_time_s": elapsed_solver})


def report_dict(problem: Problem, out: Outcome) -> dict[str, Any]:
    sol = out.solution
    known = sol.status in ("optimal", "feasible", "infeasible-hard")
    d: dict[str, Any] = {
        "status": sol.status,
        "k": sol.k,
        "objective": sol.objective if known else None,
        "uncovered": sol.uncovered if known else None,
        "time_s": round(out.time_s, 6),
        "models": [model_to_lits(m) for m in sol.models],
        "decoded": problem.decode(sol),
    }
    if out.note:
        d["note"] = out.note
    return d


def report_text(d: dict[str, Any]) -> str:
    def show(v):
        return "-" if v is None else str(v)

    lines = [
        f"status: {d['status']}",
        f"k: {d['k']}",
        f"objective: {show(d['objective'])}",
        f"uncovered: {show(d['uncovered'])}",
        f"time_s: {d['time_s']}",
    ]
    for i, lits in enumerate(d["models"], 1):
        lines.append(f"model {i}: " + " ".join(map(str, lits)))
    decoded = d.get("decoded") or {}
    for key, label in (("cliques", "clique"), ("rows", "row")):
        for i, item in enumerate(decoded.get(key, []), 1):
            lines.append(f"{label} {i}: " + " ".join(map(str, item)))
    if d.get("note"):
        lines.append(f"note: {d['note']}")
    return "\n".join(lines) + "\n"
