"""Tri-state belief grid built from scans, and its pessimistic planning view.

Unknown space is an obstacle in the planning view, so motion plans only
ever commit to cells the vehicle has actually observed free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .sim import AuvState, SensorScan, traversed_cells
from .sim.world import rle_decode, rle_encode

UNKNOWN = 0
B_FREE = 1
B_OCCUPIED = 2

HORIZON_SCOPED = "horizon_scoped"
PERSISTENT = "persistent"


@dataclass
class BeliefMap:
    """What the vehicle knows: Unknown / Free / Occupied per cell."""

    width_cells: int
    height_cells: int
    resolution: float
    cells: np.ndarray = None
    horizon_id: int = 0

    def __post_init__(self):
        if self.cells is None:
            self.cells = np.zeros((self.height_cells, self.width_cells), dtype=np.uint8)
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.shape != (self.height_cells, self.width_cells):
            raise DimensionMismatch("belief cells shape disagrees with dimensions")

    def copy(self) -> "BeliefMap":
        return BeliefMap(self.width_cells, self.height_cells, self.resolution,
                         self.cells.copy(), self.horizon_id)

    def unknown_count(self) -> int:
        return int(np.count_nonzero(self.cells == UNKNOWN))


@dataclass(frozen=True)
class PlanningView:
    """Binary Free/Blocked snapshot: Blocked = Occupied or Unknown."""

    blocked: np.ndarray
    resolution: float

    @property
    def width_cells(self) -> int:
        return self.blocked.shape[1]

    @property
    def height_cells(self) -> int:
        return self.blocked.shape[0]


def integrate_scan(belief: BeliefMap, state: AuvState,
                   scan: SensorScan) -> BeliefMap:
    """Fold one scan into the belief (pure; returns a new map).

    Cells a beam traverses before its hit point become Free; the hit cell
    becomes Occupied unless the beam saturated. Occupied evidence wins on
    conflict, so a once-seen obstacle is never grazed back to Free.
    """
    out = belief.copy()
    res = out.resolution
    cells = out.cells
    for beam in scan.horizontal:
        angle = state.theta + beam.bearing
        for ix, iy in traversed_cells(res, (state.x, state.y), angle, beam.range):
            if (0 <= ix < out.width_cells and 0 <= iy < out.height_cells
                    and cells[iy, ix] != B_OCCUPIED):
                cells[iy, ix] = B_FREE
        if not beam.saturated:
            hx = state.x + beam.range * np.cos(angle)
            hy = state.y + beam.range * np.sin(angle)
            # Nudge past the entry boundary to land inside the hit cell.
            eps = res * 1e-6
            ix = int((hx + eps * np.cos(angle)) // res)
            iy = int((hy + eps * np.sin(angle)) // res)
            if 0 <= ix < out.width_cells and 0 <= iy < out.height_cells:
                cells[iy, ix] = B_OCCUPIED
    return out


def planning_view(belief: BeliefMap) -> PlanningView:
    """Pessimistic view: Blocked iff Occupied or Unknown."""
    return PlanningView(blocked=(belief.cells != B_FREE).copy(),
                        resolution=belief.resolution)


def begin_horizon(belief: BeliefMap, mode: str = PERSISTENT) -> BeliefMap:
    """Open a new planning horizon.

    horizon_scoped discards all observations (each horizon sees only its
    own data); persistent keeps them. Both bump horizon_id.
    """
    if mode not in (HORIZON_SCOPED, PERSISTENT):
        raise ValueError(f"unknown horizon mode {mode!r}")
    out = belief.copy()
    out.horizon_id += 1
    if mode == HORIZON_SCOPED:
        out.cells[:] = UNKNOWN
    return out


def belief_to_rle(belief: BeliefMap) -> dict:
    """Snapshot for mission logs; same RLE scheme as world maps."""
    return {
        "width_cells": belief.width_cells,
        "height_cells": belief.height_cells,
        "resolution": belief.resolution,
        "horizon_id": belief.horizon_id,
        "cells_rle": rle_encode(belief.cells.ravel()),
    }


def belief_from_rle(data: dict) -> BeliefMap:
    w, h = data["width_cells"], data["height_cells"]
    return BeliefMap(w, h, data["resolution"],
                     rle_decode(data["cells_rle"], w * h).reshape(h, w),
                     data["horizon_id"])
