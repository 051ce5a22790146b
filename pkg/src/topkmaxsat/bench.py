"""Benchmark tables: instances x k x methods, with #uncov and Time cells.

A manifest is JSON::

    {
      "k": [1, 2, 3],            # or {"min": 1, "max": 6}
      "methods": ["memkc", "ee-internal"],
      "time_limit": 60,
      "repeat": 10,              # repetitions for ee-external only
      "solver_command": "open-wbo {wcnf}",
      "instances": [
        {"name": "CA(8,2,2,2,2)", "kind": "ca", "spec": "3 2 2 2 2 8"},
        {"name": "v10c50", "kind": "wcnf", "path": "v10c50.wcnf"}
      ]
    }

Paths are relative to the manifest.  Failed or timed-out cells show ``-``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .solve import load_problem, solve_topk


@dataclass(frozen=True)
class Job:
    name: str
    kind: str
    text: str
    k: int
    methods: tuple[str, ...]
    time_limit: Optional[float]
    repeat: int
    solver_command: Optional[str]


def _cell(values: list[Optional[float]]) -> str:
    if not values or any(v is None for v in values):
        return "-"
    mean = statistics.fmean(values)
    return str(int(mean)) if all(v == values[0] for v in values) and mean == int(mean) else f"{mean:.2f}"


def run_job(job: Job) -> list[str]:
    row = [job.name, str(job.k)]
    try:
        problem = load_problem(job.text, job.kind)
    except Exception:
        return row + ["-", "-"] * len(job.methods)
    for method in job.methods:
        reps = job.repeat if method == "ee-external" else 1
        uncov: list[Optional[float]] = []
        times: list[Optional[float]] = []
        for _ in range(reps):
            try:
                out = solve_topk(
                    problem, job.k, method,
                    time_limit=job.time_limit, solver_cmd=job.solver_command,
                )
            except Exception:
                uncov.append(None)
                times.append(None)
                continue
            ok = out.solution.status in ("optimal", "feasible")
            uncov.append(out.solution.uncovered if ok else None)
            times.append(round(out.time_s, 2) if ok else None)
        row += [_cell(uncov), _cell(times)]
    return row


def _k_values(spec) -> list[int]:
    if isinstance(spec, dict):
        return list(range(int(spec["min"]), int(spec["max"]) + 1))
    if isinstance(spec, int):
        return [spec]
    return [int(k) for k in spec]


def load_jobs(manifest_path: str | os.PathLike) -> tuple[list[str], list[Job]]:
    path = Path(manifest_path)
    m = json.loads(path.read_text() or "{}")
    methods = tuple(m.get("methods", ["memkc"]))
    ks = _k_values(m.get("k", [1]))
    jobs = []
    for inst in m.get("instances", []):
        kind = inst.get("kind", "wcnf")
        if "spec" in inst:
            text = inst["spec"]
        else:
            text = (path.parent / inst["path"]).read_text()
        name = inst.get("name") or Path(inst.get("path", "instance")).stem
        for k in ks:
            jobs.append(Job(name, kind, text, k, methods, m.get("time_limit"), int(m.get("repeat", 1)),
                            m.get("solver_command") or os.environ.get("TOPKMAXSAT_SOLVER")))
    header = ["Instance", "k"]
    for meth in methods:
        header += [f"{meth} #uncov", f"{meth} Time"]
    return header, jobs


def run_bench(manifest_path: str | os.PathLike, workers: Optional[int] = None) -> tuple[list[str], list[list[str]]]:
    header, jobs = load_jobs(manifest_path)
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(jobs) <= 1:
        rows = [run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_job, jobs))
    return header, rows


def format_table(header: list[str], rows: list[list[str]], as_csv: bool = False) -> str:
    if as_csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [header, *rows]]
    return "\n".join(lines) + "\n"
