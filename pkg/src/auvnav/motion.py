"""A* motion planning over a discrete turn/advance primitive lattice.

Cost g is accumulated advance length; the heuristic is straight-line
distance to the horizon goal, which never exceeds the remaining lattice
cost, so A* returns lattice-optimal plans.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .belief import PlanningView
from .errors import (BudgetExhausted, CollisionOnSweep, NoPath,
                     PrimitiveNotRegistered)
from .sim import AuvState, wrap_angle

THETA_BIN_DEG = 15.0


@dataclass(frozen=True)
class MotionPrimitive:
    """Turn in place by turn_deg, then advance straight."""

    turn_deg: float
    advance: float


@dataclass(frozen=True)
class MotionConfig:
    """Primitive sets, budgets, and tolerances for the lattice planner."""

    resolution: float = 0.5
    turn_set_deg: tuple[float, ...] = (0.0, 30.0, -30.0, 45.0, -45.0, 60.0, -60.0)
    advance_multiples: tuple[int, ...] = (1, 2, 4)
    step_len: float = 1.0
    collision_radius: float = 0.6
    node_budget: int = 50_000
    goal_tolerance: float = 1.0
    heuristic_weight: float = 1.0

    def primitives(self) -> list[MotionPrimitive]:
        return [MotionPrimitive(t, m * self.step_len)
                for t in self.turn_set_deg for m in self.advance_multiples]

    def validate_primitive(self, primitive: MotionPrimitive) -> None:
        if primitive.turn_deg not in self.turn_set_deg:
            raise PrimitiveNotRegistered(f"turn {primitive.turn_deg} deg not in set")
        advances = {m * self.step_len for m in self.advance_multiples}
        if not any(math.isclose(primitive.advance, a) for a in advances):
            raise PrimitiveNotRegistered(f"advance {primitive.advance} m not in set")


@dataclass(frozen=True)
class HorizonSpec:
    """One motion planning horizon: target point, budget, tolerance."""

    region_index: int
    goal_point: tuple[float, float]
    node_budget: int = 50_000
    goal_tolerance: float = 1.0

    def __post_init__(self):
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")


@dataclass
class MotionPlan:
    """Primitive sequence with the waypoint after each primitive."""

    primitives: list[MotionPrimitive]
    waypoints: list[AuvState]
    cost: float
    node_expansions: int = 0

    def __len__(self) -> int:
        return len(self.primitives)


@dataclass(frozen=True)
class InflatedView:
    """Upsampled blocked mask dilated by the vehicle radius.

    Guarantee: a point whose sub-cell is clear keeps the whole vehicle
    disc (plus a sweep-sampling margin) off every blocked cell.
    """

    blocked: np.ndarray
    resolution: float  # sub-cell size, meters


def effective_inflation_radius(config: MotionConfig, margin: float = 0.15,
                               factor: int = 2) -> float:
    """Cell-center clearance that guarantees inflate_view leaves the cell
    clear: dilation radius plus both sub-cell center offsets."""
    res_sub = config.resolution / factor
    return config.collision_radius + margin + 2.0 * math.sqrt(2.0) * res_sub


def inflate_view(view: PlanningView, radius: float,
                 margin: float = 0.15, factor: int = 2) -> InflatedView:
    res_sub = view.resolution / factor
    sub = np.kron(view.blocked, np.ones((factor, factor), dtype=bool))
    # Two half-diagonal pads: query point inside its sub-cell, obstacle
    # extent around its source sub-cell centers.
    r_sub = (radius + margin) / res_sub + math.sqrt(2.0)
    size = int(math.ceil(r_sub))
    yy, xx = np.mgrid[-size:size + 1, -size:size + 1]
    selem = (xx * xx + yy * yy) <= r_sub * r_sub
    return InflatedView(ndimage.binary_dilation(sub, structure=selem), res_sub)


def point_blocked(inflated: InflatedView, x: float, y: float) -> bool:
    ix = int(math.floor(x / inflated.resolution))
    iy = int(math.floor(y / inflated.resolution))
    grid = inflated.blocked
    if not (0 <= ix < grid.shape[1] and 0 <= iy < grid.shape[0]):
        return True
    return bool(grid[iy, ix])


def rollout(state: AuvState, primitive: MotionPrimitive, view: PlanningView,
            config: MotionConfig, inflated: InflatedView | None = None) -> AuvState:
    """Apply one primitive: rotate in place, then advance straight.

    Sweeps the vehicle disc along the advance at <= resolution/2 spacing
    against the pessimistic view (Unknown counts as blocked).
    """
    config.validate_primitive(primitive)
    if inflated is None:
        inflated = inflate_view(view, config.collision_radius)
    theta = wrap_angle(state.theta + math.radians(primitive.turn_deg))
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    spacing = view.resolution / 2.0
    n = max(1, int(math.ceil(primitive.advance / spacing)))
    for i in range(1, n + 1):
        d = primitive.advance * i / n
        px = state.x + d * cos_t
        py = state.y + d * sin_t
        if point_blocked(inflated, px, py):
            raise CollisionOnSweep((px, py))
    return AuvState(state.x + primitive.advance * cos_t,
                    state.y + primitive.advance * sin_t, theta)


def discretize_state(state: AuvState, config: MotionConfig) -> tuple[int, int, int]:
    """Quantize to the lattice: xy at resolution/2 bins, heading at 15 deg."""
    bin_xy = config.resolution / 2.0
    n_theta = int(round(360.0 / THETA_BIN_DEG))
    tb = int(math.floor((state.theta + math.pi) / (2.0 * math.pi) * n_theta)) % n_theta
    return (int(math.floor(state.x / bin_xy)),
            int(math.floor(state.y / bin_xy)), tb)


def plan_motion(view: PlanningView, start: AuvState, spec: HorizonSpec,
                config: MotionConfig, best_effort: bool = False,
                inflated: InflatedView | None = None) -> MotionPlan:
    """A* over the primitive lattice toward spec.goal_point.

    g = accumulated advance length, h = Euclidean distance to the goal
    point; succeeds when a node enters goal_tolerance. Deterministic
    tie-breaking: lower f, then lower h, then insertion order.

    With best_effort=True, an unreachable goal returns the path to the
    expanded node closest to it instead of raising, provided that node
    makes strictly positive progress.
    """
    if inflated is None:
        inflated = inflate_view(view, config.collision_radius)
    if point_blocked(inflated, start.x, start.y):
        raise CollisionOnSweep((start.x, start.y))

    gx, gy = spec.goal_point
    weight = config.heuristic_weight

    def h_of(s: AuvState) -> float:
        return math.hypot(s.x - gx, s.y - gy)

    primitives = config.primitives()
    start_h = h_of(start)
    if start_h <= spec.goal_tolerance:
        return MotionPlan([], [], 0.0, 0)

    counter = 0
    # heap entries: (f, h, tie, state, g, path_index)
    # paths reconstructed via parent table keyed by entry id.
    open_heap = [(weight * start_h, start_h, counter, start, 0.0, -1, None)]
    parents: list[tuple[int, MotionPrimitive, AuvState]] = []
    best_g: dict[tuple[int, int, int], float] = {}
    expansions = 0
    closest: tuple[float, int, AuvState, float] | None = None  # (h, parent_idx, state, g)

    while open_heap:
        f, h, _, state, g, parent_idx, prim = heapq.heappop(open_heap)
        key = discretize_state(state, config)
        if key in best_g and best_g[key] <= g:
            continue
        best_g[key] = g
        if prim is not None:
            parents.append((parent_idx, prim, state))
            parent_idx = len(parents) - 1
        if closest is None or h < closest[0]:
            closest = (h, parent_idx, state, g)
        if h <= spec.goal_tolerance:
            return _reconstruct(parents, parent_idx, g, expansions)
        expansions += 1
        if expansions > min(spec.node_budget, config.node_budget):
            if best_effort:
                break
            raise BudgetExhausted(f"expanded {expansions} nodes")
        for primitive in primitives:
            try:
                nxt = rollout(state, primitive, view, config, inflated)
            except CollisionOnSweep:
                continue
            ng = g + primitive.advance
            nkey = discretize_state(nxt, config)
            if nkey in best_g and best_g[nkey] <= ng:
                continue
            nh = h_of(nxt)
            counter += 1
            heapq.heappush(open_heap,
                           (ng + weight * nh, nh, counter, nxt, ng, parent_idx, primitive))

    if best_effort and closest is not None and closest[0] < start_h - 1e-9:
        h, parent_idx, state, g = closest
        return _reconstruct(parents, parent_idx, g, expansions)
    raise NoPath("open set exhausted before reaching the goal region")


def _reconstruct(parents, idx, cost, expansions) -> MotionPlan:
    prims: list[MotionPrimitive] = []
    points: list[AuvState] = []
    while idx >= 0:
        parent_idx, prim, state = parents[idx]
        prims.append(prim)
        points.append(state)
        idx = parent_idx
    prims.reverse()
    points.reverse()
    return MotionPlan(prims, points, cost, expansions)
