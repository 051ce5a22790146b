"""Seeded instance generators.

Randomness comes from SplitMix64 so that a seed names the same instance
in any language: state += 0x9E3779B97F4A7C15, then the usual two
xor-shift-multiply rounds.  Bounded integers use rejection sampling on the
raw 64-bit output; probabilities use the top 53 bits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .apps import Graph
from .core import Formula

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class RandomInstanceParams:
    n_vars: int
    n_hard: int
    clause_len: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n_hard < 0 or self.clause_len < 1:
            raise ValueError("need n_hard >= 0 and clause_len >= 1")
        if self.n_hard and self.clause_len > self.n_vars:
            raise ValueError("clause_len exceeds n_vars")


def gen_random_instance(p: RandomInstanceParams) -> Formula:
    """``n_hard`` random fixed-length hard clauses plus one positive soft unit per variable.

    Each hard clause draws ``clause_len`` distinct variables (duplicates
    redrawn, draw order kept) and then one sign bit per literal.
    """
    rng = SplitMix64(p.seed)
    hard = []
    for _ in range(p.n_hard):
        vs: list[int] = []
        while len(vs) < p.clause_len:
            v = rng.below(p.n_vars) + 1
            if v not in vs:
                vs.append(v)
        hard.append(tuple(v if rng.below(2) else -v for v in vs))
    soft = tuple((v,) for v in range(1, p.n_vars + 1))
    return Formula(p.n_vars, tuple(hard), soft)


def gen_random_graph(n: int, p: float, seed: int) -> Graph:
    """G(n, p): pairs ``(i, j)``, ``i < j``, visited in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = SplitMix64(seed)
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)
