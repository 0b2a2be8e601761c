"""Square-grid road network: intersections, directed road segments, travel times.

Intersections are numbered row-major, 0 at the top-left.  Every pair of
4-neighborhood adjacent intersections is joined by one road segment carrying
traffic in both directions; both directions share one length and one speed
limit.  Directions are labeled from the perspective of the grid drawing:
``up`` is row - 1, ``down`` is row + 1, ``left`` is col - 1, ``right`` is
col + 1.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

DIRECTIONS = ("up", "down", "left", "right")

# direction -> (row delta, col delta)
_OFFSETS = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}

# heading of travel -> incoming lane number at the destination intersection
HEADING_TO_LANE = {"up": 1, "down": 2, "right": 3, "left": 4}

# clockwise quarter turn, used for right-turn destinations
RIGHT_OF = {"up": "right", "right": "down", "down": "left", "left": "up"}


@dataclass
class GridMap:
    """Immutable-after-construction grid road network."""

    rows: int
    cols: int
    segment_length_m: float
    seed: int
    # undirected segment (a, b) with a < b -> speed limit in m/s
    speeds: dict[tuple[int, int], float] = field(default_factory=dict)

    @property
    def num_intersections(self) -> int:
        return self.rows * self.cols

    def node_id(self, row: int, col: int) -> int:
        return row * self.cols + col

    def position(self, node: int) -> tuple[int, int]:
        return divmod(node, self.cols)

    def neighbor(self, node: int, direction: str) -> int | None:
        """Adjacent intersection in ``direction``, or None at the grid edge."""
        row, col = self.position(node)
        dr, dc = _OFFSETS[direction]
        nr, nc = row + dr, col + dc
        if 0 <= nr < self.rows and 0 <= nc < self.cols:
            return self.node_id(nr, nc)
        return None

    def neighbors(self, node: int) -> list[tuple[str, int]]:
        """Existing neighbors in fixed (up, down, left, right) order."""
        if not 0 <= node < self.num_intersections:
            raise IndexError(f"intersection {node} out of range")
        out = []
        for direction in DIRECTIONS:
            other = self.neighbor(node, direction)
            if other is not None:
                out.append((direction, other))
        return out

    def undirected_segments(self) -> list[tuple[int, int]]:
        """All segments as (a, b) with a < b, ascending."""
        return sorted(self.speeds)

    def directed_roads(self) -> list[tuple[int, int]]:
        """All directed roads (u, v), ascending by (u, v)."""
        roads = []
        for a, b in self.speeds:
            roads.append((a, b))
            roads.append((b, a))
        return sorted(roads)

    def is_adjacent(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self.speeds

    def speed_limit(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        try:
            return self.speeds[key]
        except KeyError:
            raise ValueError(f"({u}, {v}) is not a road segment") from None

    def travel_time(self, u: int, v: int) -> float:
        """Seconds an average car needs for the segment: length / speed limit."""
        return self.segment_length_m / self.speed_limit(u, v)

    def travel_times(self) -> dict[tuple[int, int], float]:
        """Travel time for every directed road."""
        return {(u, v): self.travel_time(u, v) for u, v in self.directed_roads()}

    def max_speed(self) -> float:
        return max(self.speeds.values())

    def heading(self, u: int, v: int) -> str:
        """Direction of travel on the directed road u -> v."""
        ur, uc = self.position(u)
        vr, vc = self.position(v)
        for direction, (dr, dc) in _OFFSETS.items():
            if (vr - ur, vc - uc) == (dr, dc):
                return direction
        raise ValueError(f"({u}, {v}) is not a road segment")

    def to_json(self) -> str:
        doc = {
            "rows": self.rows,
            "cols": self.cols,
            "segment_length_m": self.segment_length_m,
            "seed": self.seed,
            "segments": [
                {"a": a, "b": b, "speed_mps": self.speeds[(a, b)]}
                for a, b in self.undirected_segments()
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GridMap":
        doc = json.loads(text)
        grid = cls(
            rows=doc["rows"],
            cols=doc["cols"],
            segment_length_m=doc["segment_length_m"],
            seed=doc["seed"],
        )
        for seg in doc["segments"]:
            a, b, speed = seg["a"], seg["b"], seg["speed_mps"]
            if not grid._adjacent_by_geometry(a, b):
                raise ValueError(f"segment ({a}, {b}) does not join adjacent intersections")
            if speed <= 0:
                raise ValueError(f"segment ({a}, {b}) has non-positive speed limit")
            grid.speeds[(min(a, b), max(a, b))] = speed
        expected = _expected_segment_count(grid.rows, grid.cols)
        if len(grid.speeds) != expected:
            raise ValueError(
                f"map document has {len(grid.speeds)} segments, grid needs {expected}"
            )
        return grid

    def _adjacent_by_geometry(self, a: int, b: int) -> bool:
        if not (0 <= a < self.num_intersections and 0 <= b < self.num_intersections):
            return False
        ar, ac = self.position(a)
        br, bc = self.position(b)
        return abs(ar - br) + abs(ac - bc) == 1


def _expected_segment_count(rows: int, cols: int) -> int:
    return rows * (cols - 1) + cols * (rows - 1)


def build_grid(
    rows: int,
    cols: int,
    segment_length_m: float,
    speed_limit_choices: list[float],
    seed: int,
) -> GridMap:
    """Build a grid map, drawing each segment's speed limit from the choices.

    The draw order is the ascending undirected-segment order, so identical
    inputs always produce identical maps.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid needs at least one row and one column")
    if segment_length_m <= 0:
        raise ValueError("segment length must be positive")
    if not speed_limit_choices:
        raise ValueError("need at least one speed limit choice")
    if any(s <= 0 for s in speed_limit_choices):
        raise ValueError("speed limits must be positive")

    grid = GridMap(rows=rows, cols=cols, segment_length_m=segment_length_m, seed=seed)
    rng = random.Random(seed)
    segments = []
    for node in range(rows * cols):
        for direction in ("right", "down"):
            dr, dc = _OFFSETS[direction]
            row, col = divmod(node, cols)
            if 0 <= row + dr < rows and 0 <= col + dc < cols:
                segments.append((node, (row + dr) * cols + (col + dc)))
    for a, b in sorted(segments):
        grid.speeds[(a, b)] = float(rng.choice(speed_limit_choices))
    return grid
