"""Counter-based assignment trail with unit propagation.

Shared by model enumeration, the SAT check and the MaxSAT branch-and-bound.
Each clause keeps a count of true and false literals, so assigning a literal
touches only the clauses it occurs in and undo is exact.  Soft clauses are
tracked (falsified / open) but never propagate.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Trail:
    def __init__(self, num_vars: int, hard: Iterable[Sequence[int]], soft: Iterable[Sequence[int]] = ()):
        self.n = num_vars
        clauses = [tuple(c) for c in hard]
        self.num_hard = len(clauses)
        clauses += [tuple(c) for c in soft]
        self.clauses = clauses
        self.size = [len(c) for c in clauses]
        self.nsat = [0] * len(clauses)
        self.nfalse = [0] * len(clauses)
        # occ[lit] for lit in -n..n, indexed by lit + n
        occ: list[list[int]] = [[] for _ in range(2 * num_vars + 1)]
        for ci, clause in enumerate(clauses):
            for lit in clause:
                occ[lit + num_vars].append(ci)
        self.occ = occ
        self.value = [0] * (num_vars + 1)
        self.trail: list[int] = []
        # open = not yet satisfied; score[v] = occurrences of v in open hard clauses
        self.open_hard = self.num_hard
        self.score = [0] * (num_vars + 1)
        self.soft_score = [0] * (2 * num_vars + 1)
        for ci, clause in enumerate(clauses):
            if ci < self.num_hard:
                for lit in clause:
                    self.score[abs(lit)] += 1
            else:
                for lit in clause:
                    self.soft_score[lit + num_vars] += 1
        self.soft_falsified = sum(1 for ci in range(self.num_hard, len(clauses)) if not clauses[ci])
        self.conflict = any(not clauses[ci] for ci in range(self.num_hard))

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _set(self, lit: int, units: list[int]) -> bool:
        """Assign ``lit`` true and update counters; False if a hard clause empties."""
        n = self.n
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        nh = self.num_hard
        clauses, nsat, nfalse, size = self.clauses, self.nsat, self.nfalse, self.size
        for ci in self.occ[lit + n]:
            nsat[ci] += 1
            if nsat[ci] == 1:
                if ci < nh:
                    self.open_hard -= 1
                    for x in clauses[ci]:
                        self.score[abs(x)] -= 1
                else:
                    for x in clauses[ci]:
                        self.soft_score[x + n] -= 1
                    if nfalse[ci] == size[ci]:
                        self.soft_falsified -= 1
        ok = True
        for ci in self.occ[n - lit]:
            nfalse[ci] += 1
            if nsat[ci]:
                continue
            if ci < nh:
                left = size[ci] - nfalse[ci]
                if left == 0:
                    ok = False
                elif left == 1:
                    for x in clauses[ci]:
                        if self.value[abs(x)] == 0:
                            units.append(x)
                            break
            elif nfalse[ci] == size[ci]:
                self.soft_falsified += 1
        return ok

    def _unset(self, lit: int) -> None:
        n = self.n
        nh = self.num_hard
        clauses, nsat, nfalse, size = self.clauses, self.nsat, self.nfalse, self.size
        for ci in self.occ[n - lit]:
            if not nsat[ci] and ci >= nh and nfalse[ci] == size[ci]:
                self.soft_falsified -= 1
            nfalse[ci] -= 1
        for ci in self.occ[lit + n]:
            nsat[ci] -= 1
            if nsat[ci] == 0:
                if ci < nh:
                    self.open_hard += 1
                    for x in clauses[ci]:
                        self.score[abs(x)] += 1
                else:
                    for x in clauses[ci]:
                        self.soft_score[x + n] += 1
                    if nfalse[ci] == size[ci]:
                        self.soft_falsified += 1
        self.value[abs(lit)] = 0

    def assign(self, lit: int) -> bool:
        """Assign ``lit`` and propagate hard units to fixpoint.

        On conflict the assignments stay on the trail; callers undo to a
        saved mark either way.
        """
        queue = [lit]
        while queue:
            x = queue.pop()
            val = self.lit_value(x)
            if val == 1:
                continue
            if val == -1:
                return False
            if not self._set(x, queue):
                return False
        return True

    def propagate_initial(self) -> bool:
        """Propagate unit hard clauses present before any decision."""
        if self.conflict:
            return False
        for ci in range(self.num_hard):
            if self.size[ci] == 1 and not self.nsat[ci]:
                if not self.assign(self.clauses[ci][0]):
                    return False
        return True

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            self._unset(trail.pop())

    def pick_branch_var(self) -> int:
        """Unassigned variable with most occurrences in open hard clauses (lowest index on ties); 0 if none."""
        best, best_score = 0, 0
        value, score = self.value, self.score
        for v in range(1, self.n + 1):
            if value[v] == 0 and score[v] > best_score:
                best, best_score = v, score[v]
        return best

    def unassigned(self) -> list[int]:
        return [v for v in range(1, self.n + 1) if self.value[v] == 0]

    def snapshot(self) -> list[int]:
        return self.value[1:]
