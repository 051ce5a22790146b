"""Exact solving of diversified top-k partial MaxSAT.

Two routes are provided: the expanding encoding (``ee``) into ordinary
partial MaxSAT, and model enumeration followed by Max-k-Cover (``memkc``).
"""

from .core import (
    CoverageError,
    Formula,
    TopKInstance,
    TopKSolution,
    WCNFError,
    condition,
    coverage,
    parse_wcnf,
    write_wcnf,
)
from .ee import VarMap, ee_decode, ee_encode, grow_to_maximal
from .memkc import EnumerationOverflow, me_enumerate, memkc_solve, mkc
from .pms import SolverResult, external_solve, sat_check, solve_exact

__all__ = [
    "CoverageError",
    "EnumerationOverflow",
    "Formula",
    "SolverResult",
    "TopKInstance",
    "TopKSolution",
    "VarMap",
    "WCNFError",
    "condition",
    "coverage",
    "ee_decode",
    "ee_encode",
    "external_solve",
    "grow_to_maximal",
    "me_enumerate",
    "memkc_solve",
    "mkc",
    "parse_wcnf",
    "sat_check",
    "solve_exact",
    "write_wcnf",
]

__version__ = "0.1.0"
