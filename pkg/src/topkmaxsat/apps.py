"""Diversified top-k clique and top-k covering-array encoders."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Formula, TopKInstance, TopKSolution


class ConsistencyError(RuntimeError):
    """A decoded object is not what the encoding guarantees."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"edge ({u}, {v}) is not a normalized pair in 1..{self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = sorted(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))


def parse_dimacs_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        try:
            if toks[0] == "p":
                n = int(toks[2])
            elif toks[0] == "e":
                edges.append((int(toks[1]), int(toks[2])))
            else:
                raise ValueError(f"unexpected line {raw.strip()!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if n is None:
        raise ValueError("missing 'p edge' header")
    return Graph.from_edges(n, edges)


def write_dimacs_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def encode_clique(g: Graph, k: int) -> TopKInstance:
    """Vertices become variables; every non-adjacent pair is a hard ``-vi | -vj``."""
    hard = [
        (-i, -j)
        for i, j in itertools.combinations(range(1, g.n + 1), 2)
        if not g.adjacent(i, j)
    ]
    soft = [(i,) for i in range(1, g.n + 1)]
    return TopKInstance(Formula(g.n, tuple(hard), tuple(soft)), k)


def decode_clique(sol: TopKSolution, g: Graph) -> list[frozenset[int]]:
    cliques = []
    for model in sol.models:
        vs = frozenset(i for i, val in enumerate(model, 1) if val)
        if not g.is_clique(vs):
            raise ConsistencyError(f"{sorted(vs)} is not a clique")
        cliques.append(vs)
    return cliques


def maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """Bron-Kerbosch with pivoting."""
    nbrs = {v: set() for v in range(1, g.n + 1)}
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    out: list[frozenset[int]] = []

    def bk(r: set, p: set, x: set):
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(nbrs[u] & p))
        for v in list(p - nbrs[pivot]):
            bk(r | {v}, p & nbrs[v], x & nbrs[v])
            p.remove(v)
            x.add(v)

    if g.n:
        bk(set(), set(nbrs), set())
    return sorted(out, key=sorted)


@dataclass(frozen=True)
class CoveringArraySpec:
    """Columns ``1..M`` with ``levels[c-1]`` symbols each; strength ``t``.

    ``N`` (run size) is carried for reference only; the encoding never reads it.
    """

    levels: tuple[int, ...]
    t: int
    N: int | None = None

    def __post_init__(self):
        if not self.levels or any(s < 1 for s in self.levels):
            raise ValueError("levels must be positive")
        if not 1 <= self.t <= len(self.levels):
            raise ValueError(f"strength t={self.t} outside 1..{len(self.levels)}")

    @property
    def M(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class ValueCombination:
    id: int
    columns: tuple[int, ...]
    values: tuple[int, ...]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.columns, self.values))


def parse_ca_spec(text: str) -> CoveringArraySpec:
    """``M t s_1 .. s_M [N]`` on the first non-comment line."""
    for raw in text.splitlines():
        toks = raw.split()
        if not toks or toks[0] == "c" or toks[0].startswith("#"):
            continue
        try:
            nums = [int(x) for x in toks]
        except ValueError:
            raise ValueError(f"non-integer field in CA spec line {raw.strip()!r}") from None
        if len(nums) < 3:
            raise ValueError("CA spec needs at least M t s_1")
        M, t = nums[0], nums[1]
        if len(nums) not in (2 + M, 3 + M):
            raise ValueError(f"CA spec declares M={M} but has {len(nums) - 2} trailing fields")
        n_runs = nums[2 + M] if len(nums) == 3 + M else None
        return CoveringArraySpec(tuple(nums[2 : 2 + M]), t, n_runs)
    raise ValueError("empty CA spec")


def write_ca_spec(spec: CoveringArraySpec) -> str:
    fields = [spec.M, spec.t, *spec.levels] + ([spec.N] if spec.N is not None else [])
    return " ".join(map(str, fields)) + "\n"


def enumerate_combinations(spec: CoveringArraySpec) -> list[ValueCombination]:
    out = []
    for cols in itertools.combinations(range(1, spec.M + 1), spec.t):
        for vals in itertools.product(*(range(spec.levels[c - 1]) for c in cols)):
            out.append(ValueCombination(len(out) + 1, cols, vals))
    return out


def contradicts(a: ValueCombination, b: ValueCombination) -> bool:
    va = a.as_dict()
    return any(c in va and va[c] != v for c, v in zip(b.columns, b.values))


def encode_ca(spec: CoveringArraySpec, k: int) -> TopKInstance:
    combos = enumerate_combinations(spec)
    hard = tuple(
        (-a.id, -b.id) for a, b in itertools.combinations(combos, 2) if contradicts(a, b)
    )
    soft = tuple((c.id,) for c in combos)
    return TopKInstance(Formula(len(combos), hard, soft), k)


def decode_ca(sol: TopKSolution, spec: CoveringArraySpec) -> list[tuple[int, ...]]:
    """One row per model; columns named by no true combination get symbol 0."""
    combos = enumerate_combinations(spec)
    rows = []
    for model in sol.models:
        row: dict[int, int] = {}
        for combo, val in zip(combos, model):
            if not val:
                continue
            for c, v in zip(combo.columns, combo.values):
                if row.setdefault(c, v) != v:
                    raise ConsistencyError(f"column {c} read as both {row[c]} and {v}")
        rows.append(tuple(row.get(c, 0) for c in range(1, spec.M + 1)))
    return rows


def row_coverage(rows: Iterable[Sequence[int]], spec: CoveringArraySpec) -> frozenset[int]:
    """Ids of the value combinations that appear in some row."""
    ids = {(c.columns, c.values): c.id for c in enumerate_combinations(spec)}
    out = set()
    for row in rows:
        for cols in itertools.combinations(range(1, spec.M + 1), spec.t):
            out.add(ids[(cols, tuple(row[c - 1] for c in cols))])
    return frozenset(out)


def total_combinations(spec: CoveringArraySpec) -> int:
    return sum(
        math.prod(spec.levels[c - 1] for c in cols)
        for cols in itertools.combinations(range(1, spec.M + 1), spec.t)
    )
