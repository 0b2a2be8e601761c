"""QUBO minimizers: tabu search plus exact oracles and a feasibility repair.

``solve_tabu`` is the production path.  ``solve_exhaustive`` (all binary
vectors) and ``solve_exact_onehot`` (all one-mode-per-intersection
assignments) are enumeration oracles for verification on small instances.
All solvers are deterministic given their inputs and seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qubo import NUM_MODES, QuboMatrix, VariableLayout

EXHAUSTIVE_MAX_VARS = 24
ONEHOT_MAX_INTERSECTIONS = 8

_EPS = 1e-12


@dataclass
class SolverResult:
    x: np.ndarray  # binary vector, dtype int8
    energy: float  # evaluate(q, x) + offset, recomputed exactly
    iterations_used: int
    wall_time: float


@dataclass(frozen=True)
class TabuParams:
    tenure: int = 20
    max_sweeps: int = 500
    restarts: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.tenure < 1:
            raise ValueError("tenure must be >= 1")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


def _dense_parts(q: QuboMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal vector and symmetric off-diagonal coupling matrix."""
    diag = np.zeros(q.n)
    couplings = np.zeros((q.n, q.n))
    for (r, c), w in q.terms.items():
        if r == c:
            diag[r] = w
        else:
            couplings[r, c] = w
            couplings[c, r] = w
    return diag, couplings


def _tabu_run(
    diag: np.ndarray,
    couplings: np.ndarray,
    x0: np.ndarray,
    tenure: int,
    max_sweeps: int,
) -> tuple[np.ndarray, float]:
    """One tabu descent from x0; returns the best vector seen and its raw energy."""
    n = diag.size
    x = x0.astype(float)
    energy = float(diag @ x + 0.5 * x @ (couplings @ x))
    gains = (1.0 - 2.0 * x) * (diag + couplings @ x)
    best_x = x.copy()
    best_energy = energy
    tabu_until = np.zeros(n, dtype=np.int64)

    for sweep in range(max_sweeps):
        admissible = tabu_until <= sweep
        # aspiration: a tabu flip is admissible if it would beat the best energy
        admissible |= energy + gains < best_energy - _EPS
        if not admissible.any():
            admissible[:] = True
        k = int(np.argmin(np.where(admissible, gains, np.inf)))
        step = 1.0 - 2.0 * x[k]  # +1 when switching on, -1 when switching off
        energy += gains[k]
        x[k] = 1.0 - x[k]
        gains += (1.0 - 2.0 * x) * couplings[k] * step
        gains[k] = -gains[k]
        tabu_until[k] = sweep + 1 + tenure
        if energy < best_energy - _EPS:
            best_energy = energy
            best_x = x.copy()
    return best_x, best_energy


def solve_tabu(q: QuboMatrix, offset: float, params: TabuParams) -> SolverResult:
    """Single-bit-flip tabu search with incremental gain updates.

    The first restart starts from the all-zero vector, later restarts from
    seeded random vectors; the best vector over all restarts wins, earliest
    restart on ties.
    """
    start = time.perf_counter()
    diag, couplings = _dense_parts(q)
    best_x: np.ndarray | None = None
    best_energy = np.inf
    sweeps_total = 0
    for restart in range(params.restarts):
        if restart == 0:
            x0 = np.zeros(q.n)
        else:
            rng = np.random.default_rng([params.seed, restart])
            x0 = rng.integers(0, 2, size=q.n).astype(float)
        x, energy = _tabu_run(diag, couplings, x0, params.tenure, params.max_sweeps)
        sweeps_total += params.max_sweeps
        if energy < best_energy - _EPS:
            best_energy = energy
            best_x = x
    assert best_x is not None
    bits = best_x.astype(np.int8)
    return SolverResult(
        x=bits,
        energy=q.evaluate(bits) + offset,
        iterations_used=sweeps_total,
        wall_time=time.perf_counter() - start,
    )


def solve_exhaustive(q: QuboMatrix, offset: float) -> SolverResult:
    """Minimum over all 2^n binary vectors; lexicographically smallest on ties."""
    if q.n > EXHAUSTIVE_MAX_VARS:
        raise ValueError(f"exhaustive enumeration limited to {EXHAUSTIVE_MAX_VARS} variables")
    start = time.perf_counter()
    upper = q.to_dense()
    shifts = (q.n - 1 - np.arange(q.n)).astype(np.int64)
    total = 1 << q.n
    chunk = 1 << 16
    best_energy = np.inf
    best_code = 0
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        bits = ((codes[:, None] >> shifts[None, :]) & 1).astype(float)
        energies = ((bits @ upper) * bits).sum(axis=1)
        idx = int(np.argmin(energies))
        if energies[idx] < best_energy:
            best_energy = float(energies[idx])
            best_code = int(codes[idx])
    x = ((best_code >> shifts) & 1).astype(np.int8)
    return SolverResult(
        x=x,
        energy=q.evaluate(x) + offset,
        iterations_used=total,
        wall_time=time.perf_counter() - start,
    )


def solve_exact_onehot(q: QuboMatrix, offset: float, layout: VariableLayout) -> SolverResult:
    """Minimum over all one-mode-per-intersection assignments.

    Enumerates mode sequences in lexicographic order (ties keep the smallest
    sequence).  Couplings between modes of one intersection never fire on
    one-hot vectors, so only diagonals and cross-intersection couplings enter.
    """
    m = layout.num_intersections
    if m > ONEHOT_MAX_INTERSECTIONS:
        raise ValueError(
            f"one-hot enumeration limited to {ONEHOT_MAX_INTERSECTIONS} intersections"
        )
    if layout.num_variables != q.n:
        raise ValueError("layout does not match QUBO dimension")
    start = time.perf_counter()

    diag_table = np.zeros((m, NUM_MODES))
    pair_tables: dict[tuple[int, int], np.ndarray] = {}
    for (r, c), w in q.terms.items():
        i1, j1 = layout.decode(r)
        i2, j2 = layout.decode(c)
        if r == c:
            diag_table[i1, j1 - 1] += w
        elif i1 != i2:
            table = pair_tables.setdefault((i1, i2), np.zeros((NUM_MODES, NUM_MODES)))
            table[j1 - 1, j2 - 1] += w

    total = NUM_MODES**m
    digits = [
        ((np.arange(total) // NUM_MODES ** (m - 1 - i)) % NUM_MODES).astype(np.int32)
        for i in range(m)
    ]
    energies = np.zeros(total)
    for i in range(m):
        energies += diag_table[i][digits[i]]
    for (i1, i2), table in pair_tables.items():
        energies += table[digits[i1], digits[i2]]

    best = int(np.argmin(energies))
    x = np.zeros(q.n, dtype=np.int8)
    for i in range(m):
        x[layout.var_index(i, int(digits[i][best]) + 1)] = 1
    return SolverResult(
        x=x,
        energy=q.evaluate(x) + offset,
        iterations_used=total,
        wall_time=time.perf_counter() - start,
    )


def repair(
    x: np.ndarray, layout: VariableLayout, clearance: np.ndarray
) -> tuple[np.ndarray, bool]:
    """Project a binary vector onto one mode per intersection.

    Keeps a uniquely selected mode; otherwise picks the highest-clearance mode
    among the selected ones (among all six if none is selected), lowest mode
    number on ties.  Returns (modes, whether any intersection needed fixing).
    """
    if len(x) != layout.num_variables:
        raise ValueError("vector length does not match layout")
    modes = np.zeros(layout.num_intersections, dtype=np.int64)
    repaired = False
    for i in range(layout.num_intersections):
        selected = [j for j in range(1, NUM_MODES + 1) if x[layout.var_index(i, j)]]
        if len(selected) == 1:
            modes[i] = selected[0]
            continue
        repaired = True
        candidates = selected if selected else list(range(1, NUM_MODES + 1))
        best_j = candidates[0]
        for j in candidates[1:]:
            if clearance[i, j - 1] > clearance[i, best_j - 1]:
                best_j = j
        modes[i] = best_j
    return modes, repaired


def assignment_to_vector(modes: np.ndarray, layout: VariableLayout) -> np.ndarray:
    """One-hot binary vector for a per-intersection mode assignment."""
    x = np.zeros(layout.num_variables, dtype=np.int8)
    for i, mode in enumerate(modes):
        x[layout.var_index(i, int(mode))] = 1
    return x


SolverFn = Callable[[QuboMatrix, float, VariableLayout, TabuParams], SolverResult]

_REGISTRY: dict[str, SolverFn] = {}


def register_solver(name: str, fn: SolverFn) -> None:
    _REGISTRY[name] = fn


def get_solver(name: str) -> SolverFn:
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown solver {name!r}; available: {known}") from None


register_solver("tabu", lambda q, offset, layout, params: solve_tabu(q, offset, params))
register_solver("exact", lambda q, offset, layout, params: solve_exact_onehot(q, offset, layout))
register_solver("exhaustive", lambda q, offset, layout, params: solve_exhaustive(q, offset))
