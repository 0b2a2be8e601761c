"""Objective assembly for signal-mode selection.

The objective over binary mode variables has three parts:

* a clearance reward: activating a mode pays out the number of queued cars it
  would release,
* a coordination reward: when the elapsed time lines up with the travel time
  of a segment (a platoon released earlier is now arriving), co-activating the
  receiving modes downstream is rewarded, producing green waves,
* a one-hot penalty forcing exactly one mode per intersection.

Lane geometry convention (left-hand traffic, right turns cross the
intersection): lane 1 enters from the south heading up, lane 2 from the north
heading down, lane 3 from the west heading right, lane 4 from the east heading
left.  Mode 1 is straight-only on lanes 1 and 2, mode 4 straight-only on lanes
3 and 4; modes 3, 2, 6, 5 are straight+right for lanes 1, 2, 3, 4
respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .grid import HEADING_TO_LANE, GridMap
from .qubo import NUM_MODES, QuboMatrix, VariableLayout

# mode -> headings its straight-through traffic continues in
STRAIGHT_OUTFLOWS: dict[int, tuple[str, ...]] = {
    1: ("up", "down"),
    2: ("down",),
    3: ("up",),
    4: ("right", "left"),
    5: ("left",),
    6: ("right",),
}

# axis of a heading -> straight-only mode at the receiving intersection
STRAIGHT_MODE_FOR_HEADING = {"up": 1, "down": 1, "left": 4, "right": 4}

# incoming lane -> straight+right mode serving it
STRAIGHT_RIGHT_MODE_FOR_LANE = {1: 3, 2: 2, 3: 6, 4: 5}


@dataclass(frozen=True)
class LambdaParams:
    """Objective weights; ``lam3``/``lam3_prime`` split the coordination reward
    between straight-only and straight+right receiving modes."""

    lam1: float = 1.0
    lam2: float = 60.0
    lam3: float = 0.3
    lam3_prime: float = 0.7
    lam4: float = 60.0

    def __post_init__(self) -> None:
        values = (self.lam1, self.lam2, self.lam3, self.lam3_prime, self.lam4)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("all weights must be finite")
        if any(v < 0 for v in values):
            raise ValueError("weights must be nonnegative")
        if self.lam4 <= 0:
            raise ValueError("one-hot penalty weight must be positive")


@dataclass
class QueueSnapshot:
    """Per-intersection queue counts and straight fractions.

    ``queued[i, k-1]`` counts cars on incoming lane k that would move under a
    green (left-turners never queue here), ``straight_frac[i, k-1]`` is the
    fraction of them continuing straight.
    """

    queued: np.ndarray
    straight_frac: np.ndarray

    def __post_init__(self) -> None:
        self.queued = np.asarray(self.queued, dtype=float)
        self.straight_frac = np.asarray(self.straight_frac, dtype=float)
        if self.queued.ndim != 2 or self.queued.shape[1] != 4:
            raise ValueError("queued must have shape (num_intersections, 4)")
        if self.straight_frac.shape != self.queued.shape:
            raise ValueError("straight_frac shape must match queued")
        if np.any(self.queued < 0):
            raise ValueError("queue counts must be nonnegative")
        if np.any((self.straight_frac < 0) | (self.straight_frac > 1)):
            raise ValueError("straight fractions must lie in [0, 1]")

    @property
    def num_intersections(self) -> int:
        return self.queued.shape[0]


def compute_clearance(snapshot: QueueSnapshot) -> np.ndarray:
    """Cars cleared by each mode, shape (num_intersections, 6).

    Straight-only modes clear the straight-bound share of both lanes on their
    axis; straight+right modes clear their whole lane.
    """
    a = snapshot.queued
    f = snapshot.straight_frac
    clearance = np.empty((snapshot.num_intersections, NUM_MODES))
    clearance[:, 0] = f[:, 0] * a[:, 0] + f[:, 1] * a[:, 1]
    clearance[:, 1] = a[:, 1]
    clearance[:, 2] = a[:, 0]
    clearance[:, 3] = f[:, 2] * a[:, 2] + f[:, 3] * a[:, 3]
    clearance[:, 4] = a[:, 3]
    clearance[:, 5] = a[:, 2]
    return clearance


def compute_sync_flags(
    grid: GridMap, t: float, tolerance: float
) -> dict[tuple[int, int], bool]:
    """Which directed segments are in a green-wave window at elapsed time t.

    A segment synchronizes when t is within ``tolerance`` of a multiple of its
    travel time (a car released at the far end is arriving about now).  Before
    one full traversal has been possible, only the first alignment counts.
    """
    if t < 0:
        raise ValueError("elapsed time must be nonnegative")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    flags: dict[tuple[int, int], bool] = {}
    for u, v in grid.directed_roads():
        dt = grid.travel_time(u, v)
        if t < dt:
            flags[(u, v)] = abs(dt - t) <= tolerance
        else:
            remainder = math.fmod(t, dt)
            flags[(u, v)] = remainder <= tolerance or dt - remainder <= tolerance
    return flags


class CoordinationTarget(NamedTuple):
    neighbor: int
    mode: int
    weight_class: str  # "straight" or "straight_right"
    segment: tuple[int, int]


def coordination_targets(grid: GridMap, i: int, j: int) -> list[CoordinationTarget]:
    """Downstream (intersection, mode) pairs that mode j at i feeds.

    Each straight-through outflow of mode j reaches one neighbor and yields two
    receiving modes there: the straight-only mode of the same axis and the
    straight+right mode of the lane being fed.  Outflows leaving the grid
    yield nothing.
    """
    if not 1 <= j <= NUM_MODES:
        raise IndexError(f"mode {j} out of range 1..{NUM_MODES}")
    targets: list[CoordinationTarget] = []
    for heading in STRAIGHT_OUTFLOWS[j]:
        neighbor = grid.neighbor(i, heading)
        if neighbor is None:
            continue
        lane = HEADING_TO_LANE[heading]
        segment = (i, neighbor)
        targets.append(
            CoordinationTarget(neighbor, STRAIGHT_MODE_FOR_HEADING[heading], "straight", segment)
        )
        targets.append(
            CoordinationTarget(
                neighbor, STRAIGHT_RIGHT_MODE_FOR_LANE[lane], "straight_right", segment
            )
        )
    return targets


def build_q1(layout: VariableLayout, clearance: np.ndarray, lam1: float) -> QuboMatrix:
    """Clearance reward: -lam1 * clearance on each mode variable's diagonal."""
    q = QuboMatrix(layout.num_variables)
    for index, i, j in layout.iter_variables():
        c = clearance[i, j - 1]
        if c != 0.0 and lam1 != 0.0:
            q.add_term(index, index, -lam1 * c)
    return q


def build_q2(
    layout: VariableLayout,
    grid: GridMap,
    clearance: np.ndarray,
    flags: dict[tuple[int, int], bool],
    lam2: float,
    lam3: float,
    lam3_prime: float,
) -> QuboMatrix:
    """Coordination reward on couplings between adjacent intersections.

    Active only on segments whose sync flag is set; the reward scales with the
    clearance on both ends, so conflicting sync options resolve toward the one
    moving more cars.
    """
    q = QuboMatrix(layout.num_variables)
    if lam2 == 0.0:
        return q
    for i in range(layout.num_intersections):
        for j in range(1, NUM_MODES + 1):
            c_here = clearance[i, j - 1]
            if c_here == 0.0:
                continue
            for target in coordination_targets(grid, i, j):
                if not flags.get(target.segment, False):
                    continue
                c_there = clearance[target.neighbor, target.mode - 1]
                if c_there == 0.0:
                    continue
                lam_w = lam3 if target.weight_class == "straight" else lam3_prime
                if lam_w == 0.0:
                    continue
                q.add_term(
                    layout.var_index(i, j),
                    layout.var_index(target.neighbor, target.mode),
                    -lam2 * c_here * lam_w * c_there,
                )
    return q


def build_q3(layout: VariableLayout, lam4: float) -> tuple[QuboMatrix, float]:
    """One-hot penalty ``lam4 * (1 - sum_j x_ij)^2`` per intersection.

    Returns the quadratic part and the constant offset (lam4 per intersection)
    so reported energies keep the exact penalty value.
    """
    if lam4 <= 0:
        raise ValueError("one-hot penalty weight must be positive")
    q = QuboMatrix(layout.num_variables)
    for i in range(layout.num_intersections):
        base = layout.var_index(i, 1)
        for j in range(NUM_MODES):
            q.add_term(base + j, base + j, -lam4)
            for j2 in range(j + 1, NUM_MODES):
                q.add_term(base + j, base + j2, 2.0 * lam4)
    return q, lam4 * layout.num_intersections


def build_objective(
    snapshot: QueueSnapshot,
    grid: GridMap,
    t: float,
    lambdas: LambdaParams,
    tolerance: float,
) -> tuple[QuboMatrix, float]:
    """Full objective for one decision instant: clearance + coordination +
    one-hot penalty.  Returns (matrix, constant offset)."""
    if snapshot.num_intersections != grid.num_intersections:
        raise ValueError(
            f"snapshot covers {snapshot.num_intersections} intersections, "
            f"map has {grid.num_intersections}"
        )
    layout = VariableLayout(grid.num_intersections)
    clearance = compute_clearance(snapshot)
    q = build_q1(layout, clearance, lambdas.lam1)
    flags = compute_sync_flags(grid, t, tolerance)
    q.merge(
        build_q2(layout, grid, clearance, flags, lambdas.lam2, lambdas.lam3, lambdas.lam3_prime)
    )
    q3, offset = build_q3(layout, lambdas.lam4)
    q.merge(q3)
    return q, offset
