"""Core simulation data types: vehicle state, control, world grid, sensor scan."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

FREE = 0
OCCUPIED = 1

# Horizontal beam bearings relative to heading, fixed order after the
# forward and down beams: left 30/45/60 then right 30/45/60.
BEAM_NAMES = ("forward", "down",
              "left30", "left45", "left60",
              "right30", "right45", "right60")
BEAM_BEARINGS_DEG = {
    "forward": 0.0,
    "left30": 30.0, "left45": 45.0, "left60": 60.0,
    "right30": -30.0, "right45": -45.0, "right60": -60.0,
}


def wrap_angle(theta: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class AuvState:
    """Planar vehicle pose: position in meters, heading in radians."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)
                and math.isfinite(self.theta)):
            raise ValueError("non-finite state")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    def distance_to(self, point: tuple[float, float]) -> float:
        return math.hypot(self.x - point[0], self.y - point[1])


@dataclass(frozen=True)
class ControlInput:
    """Forward speed (m/s) and turning rate (rad/s)."""

    v: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.v) and math.isfinite(self.omega)):
            raise ValueError("non-finite control")


@dataclass(frozen=True)
class SimConfig:
    """Simulation parameters. All strictly positive; dt capped at 1 s."""

    dt: float = 0.1
    v_max: float = 2.0
    omega_max: float = 1.0
    max_range: float = 30.0
    collision_radius: float = 0.6
    seafloor_clearance: float = 4.0
    seed: int = 0

    def __post_init__(self):
        for name in ("dt", "v_max", "omega_max", "max_range",
                     "collision_radius", "seafloor_clearance"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.dt > 1.0:
            raise ValueError("dt must be <= 1 s")

    def validate_control(self, control: ControlInput) -> None:
        if not (0.0 <= control.v <= self.v_max + 1e-12):
            raise ValueError(f"v={control.v} outside [0, {self.v_max}]")
        if abs(control.omega) > self.omega_max + 1e-12:
            raise ValueError(f"|omega|={abs(control.omega)} exceeds {self.omega_max}")


@dataclass(frozen=True)
class Beam:
    """One range reading: bearing relative to heading, range in meters."""

    name: str
    bearing: float
    range: float
    saturated: bool


@dataclass(frozen=True)
class SensorScan:
    """One eight-beam range scan taken at a single step."""

    step_index: int
    beams: tuple[Beam, ...]

    def __post_init__(self):
        if tuple(b.name for b in self.beams) != BEAM_NAMES:
            raise ValueError("scan must carry the 8 beams in fixed order")

    @property
    def horizontal(self) -> tuple[Beam, ...]:
        return tuple(b for b in self.beams if b.name != "down")

    def beam(self, name: str) -> Beam:
        return self.beams[BEAM_NAMES.index(name)]


@dataclass
class WorldMap:
    """Ground-truth occupancy grid with start pose and goal region.

    ``cells`` is uint8, shape (height_cells, width_cells), indexed
    [iy, ix]; cell (ix, iy) spans [ix*res, (ix+1)*res) x [iy*res, (iy+1)*res).
    """

    width_cells: int
    height_cells: int
    resolution: float
    cells: np.ndarray
    start_pose: AuvState
    goal_point: tuple[float, float]
    goal_radius: float

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.shape != (self.height_cells, self.width_cells):
            raise ValueError("cells shape disagrees with declared dimensions")

    @property
    def width_m(self) -> float:
        return self.width_cells * self.resolution

    @property
    def height_m(self) -> float:
        return self.height_cells * self.resolution

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return int(math.floor(x / self.resolution)), int(math.floor(y / self.resolution))

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x < self.width_m and 0.0 <= y < self.height_m

    def is_occupied(self, ix: int, iy: int) -> bool:
        return bool(self.cells[iy, ix] == OCCUPIED)
