"""Procedural canyon worlds and the JSON map file format."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import InfeasibleParams
from .types import FREE, OCCUPIED, AuvState, WorldMap

MAP_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CanyonParams:
    """Knobs for the canyon generator.

    Corridor half-widths are in meters; meander in [0, 1] scales the
    random drift of the corridor centerline (0 = straight).
    """

    width_cells: int = 200
    height_cells: int = 60
    resolution: float = 0.5
    min_half_width: float = 2.0
    max_half_width: float = 3.0
    meander: float = 0.5
    collision_radius: float = 0.6
    goal_radius: float = 2.0

    def __post_init__(self):
        if self.width_cells < 16 or self.height_cells < 8:
            raise InfeasibleParams("grid too small for a corridor")
        if self.min_half_width > self.max_half_width:
            raise InfeasibleParams("min_half_width exceeds max_half_width")
        min_width = 2.0 * self.min_half_width
        if min_width < 2.0 * (self.collision_radius + self.resolution):
            raise InfeasibleParams(
                "corridor too narrow for the vehicle: need width >= "
                f"{2.0 * (self.collision_radius + self.resolution)} m")
        if 2.0 * self.max_half_width >= (self.height_cells - 4) * self.resolution:
            raise InfeasibleParams("corridor wider than the grid")


def generate_canyon(seed: int, params: CanyonParams = CanyonParams()) -> WorldMap:
    """Carve a meandering free corridor through an occupied field.

    Deterministic per (seed, params). Guarantees: boundary ring occupied,
    start and goal cells free, start-to-goal 8-connected free path.
    """
    rng = np.random.default_rng(seed)
    res = params.resolution
    w, h = params.width_cells, params.height_cells

    # Centerline: low-frequency sinusoid (forces real bends) plus a
    # smoothed random walk, clipped inside the boundary ring.
    margin = params.max_half_width / res + 2.0
    amp = params.meander * (h / 2.0 - margin)
    wavelength = rng.uniform(0.3, 0.6) * w
    phase = rng.uniform(0.0, 2.0 * math.pi)
    xs = np.arange(w)
    center = h / 2.0 + amp * np.sin(2.0 * math.pi * xs / wavelength + phase)
    drift = rng.normal(0.0, params.meander * 0.8, size=w)
    center = center + np.cumsum(drift) - np.linspace(0.0, drift.sum(), w)
    kernel = np.ones(9) / 9.0
    center = np.convolve(np.pad(center, 4, mode="edge"), kernel, mode="valid")
    center = np.clip(center, margin, h - margin)

    half = rng.uniform(params.min_half_width / res, params.max_half_width / res, size=w)

    cells = np.full((h, w), OCCUPIED, dtype=np.uint8)
    ys = np.arange(h)[:, None]
    corridor = np.abs(ys - center[None, :]) <= half[None, :]
    cells[corridor] = FREE
    cells[0, :] = cells[-1, :] = OCCUPIED
    cells[:, 0] = cells[:, -1] = OCCUPIED

    start_ix, goal_ix = 3, w - 4
    start = AuvState((start_ix + 0.5) * res, (center[start_ix] + 0.5) * res, 0.0)
    goal = ((goal_ix + 0.5) * res, (center[goal_ix] + 0.5) * res)

    world = WorldMap(width_cells=w, height_cells=h, resolution=res,
                     cells=cells, start_pose=start, goal_point=goal,
                     goal_radius=params.goal_radius)
    sx, sy = world.cell_of(start.x, start.y)
    gx, gy = world.cell_of(*goal)
    cells[sy, sx] = FREE
    cells[gy, gx] = FREE
    if not free_path_exists(world, (sx, sy), (gx, gy)):
        raise InfeasibleParams(f"seed {seed}: generated corridor disconnected")
    return world


def free_path_exists(world: WorldMap, a: tuple[int, int], b: tuple[int, int]) -> bool:
    """8-connected flood fill over free cells."""
    if world.is_occupied(*a) or world.is_occupied(*b):
        return False
    seen = np.zeros_like(world.cells, dtype=bool)
    queue = deque([a])
    seen[a[1], a[0]] = True
    while queue:
        ix, iy = queue.popleft()
        if (ix, iy) == b:
            return True
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = ix + dx, iy + dy
                if (0 <= nx < world.width_cells and 0 <= ny < world.height_cells
                        and not seen[ny, nx] and world.cells[ny, nx] == FREE):
                    seen[ny, nx] = True
                    queue.append((nx, ny))
    return False


# --- JSON map file format (row-major RLE occupancy) ---

def rle_encode(flat: np.ndarray) -> list[list[int]]:
    """Row-major run-length encoding: [[value, count], ...]."""
    runs: list[list[int]] = []
    for v in flat:
        v = int(v)
        if runs and runs[-1][0] == v:
            runs[-1][1] += 1
        else:
            runs.append([v, 1])
    return runs


def rle_decode(runs: list[list[int]], size: int) -> np.ndarray:
    out = np.empty(size, dtype=np.uint8)
    pos = 0
    for value, count in runs:
        out[pos:pos + count] = value
        pos += count
    if pos != size:
        raise ValueError(f"RLE length {pos} != expected {size}")
    return out


def map_to_dict(world: WorldMap) -> dict:
    return {
        "schema_version": MAP_SCHEMA_VERSION,
        "width_cells": world.width_cells,
        "height_cells": world.height_cells,
        "resolution": world.resolution,
        "start": {"x": world.start_pose.x, "y": world.start_pose.y,
                  "theta": world.start_pose.theta},
        "goal": {"x": world.goal_point[0], "y": world.goal_point[1],
                 "radius": world.goal_radius},
        "occupancy_rle": rle_encode(world.cells.ravel()),
    }


def map_from_dict(data: dict) -> WorldMap:
    w, h = data["width_cells"], data["height_cells"]
    cells = rle_decode(data["occupancy_rle"], w * h).reshape(h, w)
    return WorldMap(
        width_cells=w, height_cells=h, resolution=data["resolution"],
        cells=cells,
        start_pose=AuvState(data["start"]["x"], data["start"]["y"],
                            data["start"]["theta"]),
        goal_point=(data["goal"]["x"], data["goal"]["y"]),
        goal_radius=data["goal"]["radius"],
    )


def save_map(world: WorldMap, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(map_to_dict(world), fh, separators=(",", ":"))


def load_map(path) -> WorldMap:
    with open(path, encoding="utf-8") as fh:
        return map_from_dict(json.load(fh))
