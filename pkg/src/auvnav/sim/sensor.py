"""Ray casting over occupancy grids and disc collision tests."""

from __future__ import annotations

import math

import numpy as np

from ..errors import OutOfBounds, PoseInObstacle
from .types import (BEAM_BEARINGS_DEG, BEAM_NAMES, OCCUPIED, AuvState, Beam,
                    SensorScan, SimConfig, WorldMap)


def raycast_grid(blocked: np.ndarray, resolution: float,
                 origin: tuple[float, float], angle: float,
                 max_range: float) -> tuple[float, bool]:
    """March a ray through the grid until a blocked cell or max_range.

    Exact cell-boundary traversal; the returned range is the distance to
    the entry point of the hit cell. Returns (range, hit). Rays leaving
    the grid saturate at max_range.
    """
    height, width = blocked.shape
    ox, oy = origin
    ix = int(math.floor(ox / resolution))
    iy = int(math.floor(oy / resolution))
    if not (0 <= ix < width and 0 <= iy < height):
        raise OutOfBounds(f"ray origin {origin} outside grid")
    if blocked[iy, ix]:
        return 0.0, True

    dx = math.cos(angle)
    dy = math.sin(angle)
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    # Distance along the ray to the next vertical / horizontal cell boundary.
    if dx != 0.0:
        next_bx = (ix + (1 if dx > 0 else 0)) * resolution
        t_max_x = (next_bx - ox) / dx
        t_delta_x = resolution / abs(dx)
    else:
        t_max_x = math.inf
        t_delta_x = math.inf
    if dy != 0.0:
        next_by = (iy + (1 if dy > 0 else 0)) * resolution
        t_max_y = (next_by - oy) / dy
        t_delta_y = resolution / abs(dy)
    else:
        t_max_y = math.inf
        t_delta_y = math.inf

    while True:
        if t_max_x < t_max_y:
            t = t_max_x
            t_max_x += t_delta_x
            ix += step_x
        else:
            t = t_max_y
            t_max_y += t_delta_y
            iy += step_y
        if t >= max_range:
            return max_range, False
        if not (0 <= ix < width and 0 <= iy < height):
            return max_range, False
        if blocked[iy, ix]:
            return t, True


def traversed_cells(resolution: float, origin: tuple[float, float],
                    angle: float, length: float) -> list[tuple[int, int]]:
    """Cells crossed by a segment of given length, excluding the cell the
    segment ends in when it ends exactly on a boundary. Origin cell included."""
    ox, oy = origin
    ix = int(math.floor(ox / resolution))
    iy = int(math.floor(oy / resolution))
    cells = [(ix, iy)]
    dx = math.cos(angle)
    dy = math.sin(angle)
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    if dx != 0.0:
        t_max_x = ((ix + (1 if dx > 0 else 0)) * resolution - ox) / dx
        t_delta_x = resolution / abs(dx)
    else:
        t_max_x, t_delta_x = math.inf, math.inf
    if dy != 0.0:
        t_max_y = ((iy + (1 if dy > 0 else 0)) * resolution - oy) / dy
        t_delta_y = resolution / abs(dy)
    else:
        t_max_y, t_delta_y = math.inf, math.inf
    while True:
        if t_max_x < t_max_y:
            t = t_max_x
            t_max_x += t_delta_x
            ix += step_x
        else:
            t = t_max_y
            t_max_y += t_delta_y
            iy += step_y
        if t >= length:
            return cells
        cells.append((ix, iy))


def cast_rays(world: WorldMap, state: AuvState, config: SimConfig,
              step_index: int = 0) -> SensorScan:
    """Take one eight-beam scan at the given pose.

    Horizontal beams ray-march the grid; the down beam reports the
    configured seafloor clearance (constant-depth abstraction).
    """
    if not world.in_bounds(state.x, state.y):
        raise OutOfBounds(f"pose ({state.x}, {state.y}) outside map")
    ix, iy = world.cell_of(state.x, state.y)
    if world.is_occupied(ix, iy):
        raise PoseInObstacle(f"pose ({state.x}, {state.y}) inside occupied cell")

    blocked = world.cells == OCCUPIED
    beams = []
    for name in BEAM_NAMES:
        if name == "down":
            beams.append(Beam("down", 0.0, config.seafloor_clearance,
                              config.seafloor_clearance >= config.max_range))
            continue
        bearing = math.radians(BEAM_BEARINGS_DEG[name])
        rng, hit = raycast_grid(blocked, world.resolution,
                                (state.x, state.y), state.theta + bearing,
                                config.max_range)
        beams.append(Beam(name, bearing, rng if hit else config.max_range, not hit))
    return SensorScan(step_index=step_index, beams=tuple(beams))


def disc_hits_cells(blocked: np.ndarray, resolution: float,
                    x: float, y: float, radius: float) -> bool:
    """True iff the disc at (x, y) intersects any blocked cell."""
    height, width = blocked.shape
    ix_lo = int(math.floor((x - radius) / resolution))
    ix_hi = int(math.floor((x + radius) / resolution))
    iy_lo = int(math.floor((y - radius) / resolution))
    iy_hi = int(math.floor((y + radius) / resolution))
    for iy in range(max(iy_lo, 0), min(iy_hi, height - 1) + 1):
        cy = min(max(y, iy * resolution), (iy + 1) * resolution)
        for ix in range(max(ix_lo, 0), min(ix_hi, width - 1) + 1):
            if not blocked[iy, ix]:
                continue
            cx = min(max(x, ix * resolution), (ix + 1) * resolution)
            if (cx - x) ** 2 + (cy - y) ** 2 <= radius * radius:
                return True
    return False


def check_collision(world: WorldMap, state: AuvState, radius: float) -> bool:
    """True iff any occupied cell intersects the vehicle disc."""
    if not world.in_bounds(state.x, state.y):
        raise OutOfBounds(f"pose ({state.x}, {state.y}) outside map")
    if (state.x - radius < 0.0 or state.x + radius > world.width_m
            or state.y - radius < 0.0 or state.y + radius > world.height_m):
        raise OutOfBounds("vehicle disc exits the grid")
    return disc_hits_cells(world.cells == OCCUPIED, world.resolution,
                           state.x, state.y, radius)
