"""Sparse QUBO instances and the (intersection, mode) variable indexing.

A QUBO instance is ``energy(x) = sum_{r <= c} w[r, c] * x[r] * x[c]`` over a
binary vector ``x``.  Coefficients live in a canonical upper-triangular sparse
map; diagonal entries are linear terms (``x*x == x`` for binaries) and each
off-diagonal entry carries the full coupling weight exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NUM_MODES = 6


class QuboMatrix:
    """Upper-triangular sparse QUBO over ``n`` binary variables."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int) -> None:
        if n < 1:
            raise ValueError(f"QUBO needs at least one variable, got n={n}")
        self.n = n
        self.terms: dict[tuple[int, int], float] = {}

    def add_term(self, r: int, c: int, w: float) -> None:
        """Accumulate ``w`` onto the canonical key ``(min(r,c), max(r,c))``.

        Entries that cancel to exactly zero are removed, so adding and then
        subtracting the same weight restores the previous matrix.
        """
        if not (0 <= r < self.n) or not (0 <= c < self.n):
            raise IndexError(f"variable index out of range: ({r}, {c}) with n={self.n}")
        key = (r, c) if r <= c else (c, r)
        value = self.terms.get(key, 0.0) + w
        if value == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = value

    def coefficient(self, r: int, c: int) -> float:
        key = (r, c) if r <= c else (c, r)
        return self.terms.get(key, 0.0)

    def evaluate(self, x: Sequence[int]) -> float:
        """Energy of a binary vector (offset excluded).

        Terms are summed in sorted key order so the result does not depend on
        the order in which ``add_term`` calls were made.
        """
        if len(x) != self.n:
            raise ValueError(f"vector length {len(x)} != QUBO dimension {self.n}")
        return sum(w * x[r] * x[c] for (r, c), w in sorted(self.terms.items()))

    def merge(self, other: "QuboMatrix") -> None:
        """Element-wise add another matrix of the same dimension into this one."""
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
        for (r, c), w in other.terms.items():
            self.add_term(r, c, w)

    def to_dense(self) -> np.ndarray:
        """Dense upper-triangular copy (diagonal included)."""
        dense = np.zeros((self.n, self.n))
        for (r, c), w in self.terms.items():
            dense[r, c] = w
        return dense

    def dump_terms(self) -> str:
        """Text export, one ``r c w`` line per term in ascending key order."""
        lines = [f"{r} {c} {w!r}" for (r, c), w in sorted(self.terms.items())]
        return "\n".join(lines)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"QuboMatrix(n={self.n}, nonzero_terms={len(self.terms)})"


def new_qubo(n: int) -> QuboMatrix:
    return QuboMatrix(n)


@dataclass(frozen=True)
class VariableLayout:
    """Fixed mapping between (intersection, mode) pairs and variable indices."""

    num_intersections: int
    modes_per_intersection: int = NUM_MODES

    def __post_init__(self) -> None:
        if self.num_intersections < 1:
            raise ValueError("layout needs at least one intersection")

    @property
    def num_variables(self) -> int:
        return self.num_intersections * self.modes_per_intersection

    def var_index(self, intersection: int, mode: int) -> int:
        """Variable index of ``mode`` (1-based) at ``intersection`` (0-based)."""
        if not 0 <= intersection < self.num_intersections:
            raise IndexError(f"intersection {intersection} out of range")
        if not 1 <= mode <= self.modes_per_intersection:
            raise IndexError(f"mode {mode} out of range 1..{self.modes_per_intersection}")
        return intersection * self.modes_per_intersection + (mode - 1)

    def decode(self, index: int) -> tuple[int, int]:
        """Inverse of :meth:`var_index`, returning ``(intersection, mode)``."""
        if not 0 <= index < self.num_variables:
            raise IndexError(f"variable index {index} out of range")
        return divmod(index, self.modes_per_intersection)[0], index % self.modes_per_intersection + 1

    def iter_variables(self) -> Iterable[tuple[int, int, int]]:
        """Yield ``(index, intersection, mode)`` for every variable."""
        for i in range(self.num_intersections):
            for j in range(1, self.modes_per_intersection + 1):
                yield self.var_index(i, j), i, j
