"""Closed-loop mission executive.

Wires goal -> task plan -> motion plan -> simulated execution with
event-triggered replanning, and implements the three comparison
pipelines plus the seed-sweep benchmark.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from scipy import ndimage

from . import htn
from .belief import (PERSISTENT, BeliefMap, begin_horizon, belief_to_rle,
                     integrate_scan, planning_view)
from .errors import CollisionOnSweep, NoPath, StaleScan
from .goals import MissionGoal
from .logs import LogRecord
from .motion import (HorizonSpec, MotionConfig, MotionPlan,
                     effective_inflation_radius, inflate_view, plan_motion)
from .sim import (AuvState, CanyonParams, ControlInput, SensorScan, SimConfig,
                  WorldMap, cast_rays, check_collision, generate_canyon, step,
                  wrap_angle)


class PipelineKind(str, Enum):
    LLM_ONLY = "llm_only"
    LLM_MOTION = "llm_motion"
    LLM_TASK_MOTION = "llm_task_motion"


@dataclass(frozen=True)
class CheckThresholds:
    """Beam-range safety thresholds; a range strictly below its threshold
    is a violation. Forward must be at least the lateral threshold."""

    forward: float = 2.0
    lateral: float = 0.5

    def __post_init__(self):
        if self.forward < self.lateral:
            raise ValueError("forward threshold must be >= lateral threshold")


@dataclass(frozen=True)
class FaultSpec:
    """Phantom-obstacle injection: occupy a free cell ahead of the vehicle
    once the step counter passes at_step (applied just before a check)."""

    at_step: int
    distance_ahead: float = 1.7


@dataclass
class MissionSettings:
    sim: SimConfig = field(default_factory=SimConfig)
    motion: MotionConfig = field(default_factory=MotionConfig)
    thresholds: CheckThresholds = field(default_factory=CheckThresholds)
    step_cap: int = 5000
    horizon_mode: str = PERSISTENT
    # Distance budget executed per task cycle. The whole horizon plan by
    # default: plans only cross known-free space, and truncating them
    # mid-maneuver can oscillate.
    cycle_advance: float = math.inf
    horizon_budget: int = 1500
    llm_motion_budget: int = 600
    stagnation_limit: int = 30
    recovery_limit: int = 8
    fault: FaultSpec | None = None


@dataclass(frozen=True)
class TampProblem:
    """Formal tuple: state-space bounds, action sets, initial state, goal set."""

    bounds: tuple[float, float]
    turn_set_deg: tuple[float, ...]
    advances: tuple[float, ...]
    initial: AuvState
    goal_point: tuple[float, float]
    goal_radius: float


@dataclass
class ReplanEvent:
    step_index: int
    trigger: str  # check_violation | motion_no_path | sweep_collision
    summary: str


@dataclass
class MissionReport:
    success: bool
    planning_time: float
    node_expansions: int
    path_length: float
    replan_count: int
    steps: int
    failure_reason: str | None = None
    collision_count: int = 0
    unknown_waypoint_count: int = 0

    def to_dict(self, include_timing: bool = True) -> dict:
        data = {
            "success": self.success,
            "node_expansions": self.node_expansions,
            "path_length": round(self.path_length, 6),
            "replan_count": self.replan_count,
            "steps": self.steps,
            "failure_reason": self.failure_reason,
            "collision_count": self.collision_count,
            "unknown_waypoint_count": self.unknown_waypoint_count,
        }
        if include_timing:
            data["planning_time"] = self.planning_time
        return data


@dataclass
class CheckResult:
    ok: bool
    beam: str | None = None
    range: float | None = None


def execute_check(state: AuvState, scan: SensorScan,
                  thresholds: CheckThresholds,
                  current_step: int | None = None) -> CheckResult:
    """Judge a fresh scan: violation iff any horizontal beam range is
    strictly below its bearing's threshold."""
    if current_step is not None and scan.step_index != current_step:
        raise StaleScan(f"scan from step {scan.step_index}, now {current_step}")
    for beam in scan.horizontal:
        limit = thresholds.forward if beam.name == "forward" else thresholds.lateral
        if beam.range < limit:
            return CheckResult(ok=False, beam=beam.name, range=beam.range)
    return CheckResult(ok=True)


def problem_of(world: WorldMap, settings: MissionSettings) -> TampProblem:
    return TampProblem(
        bounds=(world.width_m, world.height_m),
        turn_set_deg=settings.motion.turn_set_deg,
        advances=tuple(m * settings.motion.step_len
                       for m in settings.motion.advance_multiples),
        initial=world.start_pose,
        goal_point=world.goal_point,
        goal_radius=world.goal_radius,
    )


class _Done(Exception):
    """Internal: goal region entered mid-execution."""


class _Collision(Exception):
    """Internal: ground-truth collision during execution."""


class _Aborted(Exception):
    """Internal: operator abort."""


class MissionControl:
    """Pause/abort surface for the live service."""

    def __init__(self):
        import threading
        self.pause = threading.Event()
        self.abort = threading.Event()


class _Mission:
    """State shared across one mission run."""

    def __init__(self, world: WorldMap, goal: MissionGoal,
                 settings: MissionSettings, observer=None, control=None):
        self.settings = settings
        self.goal = goal
        self.world = world
        if settings.fault is not None:
            # Fault injection mutates the world; work on a copy.
            self.world = replace(world, cells=world.cells.copy())
        self.pose = world.start_pose
        self.belief = BeliefMap(world.width_cells, world.height_cells,
                                world.resolution)
        self.step_index = 0
        self.sim_time = 0.0
        self.path_length = 0.0
        self.planning_time = 0.0
        self.node_expansions = 0
        self.replans: list[ReplanEvent] = []
        self.collision_count = 0
        self.unknown_waypoints = 0
        self.observer = observer
        self.control = control
        self.fault_done = settings.fault is None

    # --- plumbing ---

    def emit(self, kind: str, payload: dict) -> None:
        if self.observer is not None:
            self.observer(LogRecord(step_index=self.step_index, kind=kind,
                                    payload=payload,
                                    timestamp=round(self.sim_time, 9)))

    def _emit_state(self) -> None:
        self.emit("state", {"x": round(self.pose.x, 9),
                            "y": round(self.pose.y, 9),
                            "theta": round(self.pose.theta, 9)})

    def goal_reached(self) -> bool:
        return self.pose.distance_to(self.world.goal_point) <= self.world.goal_radius

    def _one_step(self, control: ControlInput, dt: float,
                  tolerate_collision: bool = False) -> None:
        if self.control is not None:
            while self.control.pause.is_set() and not self.control.abort.is_set():
                time.sleep(0.02)
            if self.control.abort.is_set():
                raise _Aborted()
        if self.step_index >= self.settings.step_cap:
            raise _Done() if self.goal_reached() else _StepCap()
        self.pose = step(self.pose, control, dt, self.settings.sim)
        self.step_index += 1
        self.sim_time += dt
        self.path_length += control.v * dt
        self._emit_state()
        try:
            hit = check_collision(self.world, self.pose,
                                  self.settings.sim.collision_radius)
        except Exception:
            hit = True
        if hit:
            self.collision_count += 1
            if not tolerate_collision:
                raise _Collision()
        if self.goal_reached():
            raise _Done()

    def run_control(self, v: float, omega: float, duration: float,
                    tolerate_collision: bool = False) -> None:
        """Integrate a constant control for a duration, in dt sub-steps."""
        dt = self.settings.sim.dt
        remaining = duration
        control = ControlInput(v, omega)
        while remaining > 1e-9:
            self._one_step(control, min(dt, remaining), tolerate_collision)
            remaining -= dt

    def turn_by(self, angle: float, tolerate_collision: bool = False) -> None:
        if abs(angle) < 1e-9:
            return
        omega = math.copysign(self.settings.sim.omega_max, angle)
        self.run_control(0.0, omega, abs(angle) / self.settings.sim.omega_max,
                         tolerate_collision)

    def advance_by(self, distance: float, tolerate_collision: bool = False) -> None:
        if distance < 1e-9:
            return
        v = self.settings.sim.v_max
        self.run_control(v, 0.0, distance / v, tolerate_collision)

    # --- sensing ---

    def scan_here(self) -> SensorScan:
        scan = cast_rays(self.world, self.pose, self.settings.sim,
                         step_index=self.step_index)
        before = self.belief.cells.copy()
        self.belief = integrate_scan(self.belief, self.pose, scan)
        changed = np.argwhere(before != self.belief.cells)
        self.emit("scan", {
            "beams": [{"name": b.name, "bearing": round(b.bearing, 6),
                       "range": round(b.range, 6), "saturated": b.saturated}
                      for b in scan.beams],
            "belief_delta": [[int(ix), int(iy), int(self.belief.cells[iy, ix])]
                             for iy, ix in changed],
        })
        return scan

    def sweep(self, angle: float) -> None:
        """Rotate by `angle` taking a scan after every integration step.

        Eight fixed beams are angularly sparse; scanning while turning
        composites them into dense coverage so the pessimistic planning
        view actually opens up around the vehicle.
        """
        self.scan_here()
        if abs(angle) < 1e-9:
            return
        omega = math.copysign(self.settings.sim.omega_max, angle)
        dt = self.settings.sim.dt
        remaining = abs(angle) / self.settings.sim.omega_max
        control = ControlInput(0.0, omega)
        while remaining > 1e-9:
            self._one_step(control, min(dt, remaining))
            self.scan_here()
            remaining -= dt

    def initial_sweep(self) -> None:
        """Full scanning rotation: bootstraps a dense known-free disc
        around the start pose so the first motion plan has a clear start
        in the pessimistic view."""
        self.sweep(2.0 * math.pi)

    def maybe_inject_fault(self) -> None:
        """Occupy a free cell ahead once the step counter passes the
        trigger, keeping the map solvable."""
        spec = self.settings.fault
        if self.fault_done or self.step_index < spec.at_step:
            return
        cos_t, sin_t = math.cos(self.pose.theta), math.sin(self.pose.theta)
        candidates = [(d, lat)
                      for d in (spec.distance_ahead, spec.distance_ahead + 0.25,
                                spec.distance_ahead - 0.25, spec.distance_ahead + 0.5)
                      for lat in (0.0, 0.5, -0.5)]
        for dist, lat in candidates:
            px = self.pose.x + dist * cos_t - lat * sin_t
            py = self.pose.y + dist * sin_t + lat * cos_t
            if not self.world.in_bounds(px, py):
                continue
            ix, iy = self.world.cell_of(px, py)
            if self.world.is_occupied(ix, iy):
                continue
            self.world.cells[iy, ix] = 1
            # Solvable at the planner's inflation radius, not just the
            # physical one, or the pessimistic view seals the corridor.
            if _still_solvable(self.world, self.pose,
                               effective_inflation_radius(self.settings.motion)):
                self.fault_done = True
                self.emit("replan_event", {"trigger": "fault_injected",
                                           "summary": f"obstacle at cell ({ix},{iy})"})
                return
            self.world.cells[iy, ix] = 0

    # --- reporting ---

    def report(self, success: bool, reason: str | None = None) -> MissionReport:
        rep = MissionReport(
            success=success, planning_time=self.planning_time,
            node_expansions=self.node_expansions,
            path_length=self.path_length,
            replan_count=len(self.replans), steps=self.step_index,
            failure_reason=reason, collision_count=self.collision_count,
            unknown_waypoint_count=self.unknown_waypoints)
        payload = rep.to_dict(include_timing=False)
        payload["belief_snapshot"] = belief_to_rle(self.belief)
        self.emit("report", payload)
        return rep


class _StepCap(Exception):
    pass


def _still_solvable(world: WorldMap, pose: AuvState, radius: float) -> bool:
    """Clearance-aware reachability from the pose to the goal."""
    free = world.cells == 0
    dist = ndimage.distance_transform_edt(free) * world.resolution
    open_cells = dist > radius
    labels, _ = ndimage.label(open_cells, structure=np.ones((3, 3)))
    ix, iy = world.cell_of(pose.x, pose.y)
    gx, gy = world.cell_of(*world.goal_point)
    return labels[iy, ix] != 0 and labels[iy, ix] == labels[gy, gx]


def _frontier_target(inflated, pose: AuvState,
                     goal_point: tuple[float, float],
                     min_standoff: float = 0.0) -> tuple[float, float] | None:
    """Reachable clear cell closest to the global goal; None if nothing
    improves on the current position.

    Candidates within min_standoff of the pose are skipped: a target the
    planner already satisfies produces an empty plan and no motion.
    """
    res = inflated.resolution
    ix = int(pose.x // res)
    iy = int(pose.y // res)
    clear = ~inflated.blocked
    if not clear[iy, ix]:
        return None
    labels, _ = ndimage.label(clear, structure=np.ones((3, 3)))
    component = labels == labels[iy, ix]
    ys, xs = np.nonzero(component)
    cx = (xs + 0.5) * res
    cy = (ys + 0.5) * res
    d = np.hypot(cx - goal_point[0], cy - goal_point[1])
    if min_standoff > 0.0:
        far_enough = np.hypot(cx - pose.x, cy - pose.y) > min_standoff
        if not far_enough.any():
            return None
        d = np.where(far_enough, d, np.inf)
    best = int(np.argmin(d))
    here = math.hypot(pose.x - goal_point[0], pose.y - goal_point[1])
    if d[best] >= here - 0.3:
        return None
    return float(cx[best]), float(cy[best])


def _resolve_goal_point(goal: MissionGoal, world: WorldMap) -> tuple[float, float]:
    # Named points: only canyon endpoints exist in this world model.
    return world.goal_point


def _audit_plan(mission: _Mission, mp: MotionPlan) -> None:
    """Count planned waypoints that sit on Unknown belief cells (the
    pessimism-safety property says there must be none)."""
    cells = mission.belief.cells
    res = mission.belief.resolution
    for wp in mp.waypoints:
        ix, iy = int(wp.x // res), int(wp.y // res)
        if 0 <= ix < cells.shape[1] and 0 <= iy < cells.shape[0]:
            if cells[iy, ix] == 0:
                mission.unknown_waypoints += 1


def _execute_motion_prefix(mission: _Mission, mp: MotionPlan,
                           max_distance: float) -> None:
    """Receding horizon: execute leading primitives until the distance
    budget is spent, then hand control back for re-sensing."""
    spent = 0.0
    for primitive in mp.primitives:
        if spent >= max_distance:
            break
        mission.turn_by(math.radians(primitive.turn_deg))
        mission.advance_by(primitive.advance)
        spent += primitive.advance


# --- pipelines ---

def run_pipeline_llm_task_motion(world: WorldMap, goal: MissionGoal,
                                 settings: MissionSettings,
                                 observer=None, control=None) -> MissionReport:
    """The full stack: HTN task cycles grounding move steps through A*
    over the pessimistic belief view, with check()-triggered replanning."""
    m = _Mission(world, goal, settings, observer, control)
    domain = htn.default_domain()
    sym = frozenset(goal.start_literals)
    goal_point = _resolve_goal_point(goal, world)
    m.emit("chat", {"role": "system", "text": "mission started",
                    "pipeline": PipelineKind.LLM_TASK_MOTION.value})
    stagnant = 0
    recoveries = 0
    region_index = 0
    try:
        m.initial_sweep()
        while True:
            if m.goal_reached():
                return m.report(True)
            if m.step_index >= settings.step_cap:
                return m.report(False, "step_cap")
            if stagnant >= settings.stagnation_limit:
                return m.report(False, "no_progress")

            # Resync logical state with physical truth before each cycle.
            sym = frozenset(s for s in sym if s not in ("at_goal", "perception_fresh"))
            m.belief = begin_horizon(m.belief, settings.horizon_mode)
            t0 = time.perf_counter()
            plan = htn.decompose(goal, sym, domain)
            m.planning_time += time.perf_counter() - t0
            m.emit("task", {"steps": [t.name for t in plan.steps]})

            cycle_start = m.pose
            violation = None
            for task in plan.steps:
                sym = htn.apply_task(task, sym)
                m.emit("predicate_state", {"truths": sorted(sym)})
                if task.name == "perception":
                    # Alternate sweep direction so coverage stays symmetric.
                    m.sweep(math.radians(90.0) * (1 if region_index % 2 == 0 else -1))
                elif task.name == "move_forward":
                    view = planning_view(m.belief)
                    inflated = inflate_view(view, settings.motion.collision_radius)
                    target = _frontier_target(
                        inflated, m.pose, goal_point,
                        min_standoff=settings.motion.goal_tolerance)
                    if target is None:
                        violation = ("motion_no_path", "no reachable progress; rotating")
                        break
                    region_index += 1
                    spec = HorizonSpec(region_index=region_index, goal_point=target,
                                       node_budget=settings.horizon_budget,
                                       goal_tolerance=settings.motion.goal_tolerance)
                    t0 = time.perf_counter()
                    try:
                        mp = plan_motion(view, m.pose, spec, settings.motion,
                                         best_effort=True, inflated=inflated)
                    except (NoPath, CollisionOnSweep) as exc:
                        m.planning_time += time.perf_counter() - t0
                        kind = ("sweep_collision" if isinstance(exc, CollisionOnSweep)
                                else "motion_no_path")
                        violation = (kind, str(exc))
                        break
                    m.planning_time += time.perf_counter() - t0
                    m.node_expansions += mp.node_expansions
                    _audit_plan(m, mp)
                    m.emit("motion_plan", {
                        "primitives": [[p.turn_deg, p.advance] for p in mp.primitives],
                        "cost": round(mp.cost, 6),
                        "expansions": mp.node_expansions,
                        "target": [round(target[0], 4), round(target[1], 4)],
                    })
                    _execute_motion_prefix(m, mp, settings.cycle_advance)
                elif task.name == "check":
                    m.maybe_inject_fault()
                    scan = m.scan_here()
                    result = execute_check(m.pose, scan, settings.thresholds,
                                           current_step=m.step_index)
                    if not result.ok:
                        sym = sym - {"collision_free"}
                        violation = ("check_violation",
                                     f"{result.beam} range {result.range:.2f} m")
                        break
                elif task.name in ("turn_left", "turn_right"):
                    angle = math.radians((task.params or {}).get("angle", 30.0))
                    m.turn_by(angle if task.name == "turn_left" else -angle)

            if violation is not None:
                trigger, summary = violation
                m.replans.append(ReplanEvent(m.step_index, trigger, summary))
                m.emit("replan_event", {"trigger": trigger, "summary": summary})
                if trigger == "check_violation":
                    # The obstacle is now in the belief; the replanning
                    # cycle itself is the corrective action, so the
                    # collision_free invariant is restored for planning.
                    sym = sym | {"collision_free"}
                if trigger == "motion_no_path":
                    recoveries += 1
                    if recoveries > settings.recovery_limit:
                        return m.report(False, "no_path")
                    m.turn_by(math.radians(60.0))
                    m.scan_here()
            else:
                recoveries = 0

            # Stagnation counts every cycle, violations included, so a
            # replan loop that never moves still terminates.
            moved = m.pose.distance_to((cycle_start.x, cycle_start.y))
            stagnant = stagnant + 1 if moved < 0.05 else 0
    except _Done:
        return m.report(True)
    except _StepCap:
        return m.report(False, "step_cap")
    except _Collision:
        return m.report(False, "collision")
    except _Aborted:
        return m.report(False, "aborted")


def run_pipeline_llm_motion(world: WorldMap, goal: MissionGoal,
                            settings: MissionSettings,
                            observer=None, control=None) -> MissionReport:
    """Baseline without task structure: after every scan, one monolithic
    A* toward the far canyon end over the pessimistic view, executing a
    single primitive before replanning."""
    m = _Mission(world, goal, settings, observer, control)
    goal_point = _resolve_goal_point(goal, world)
    m.emit("chat", {"role": "system", "text": "mission started",
                    "pipeline": PipelineKind.LLM_MOTION.value})
    stagnant = 0
    recoveries = 0
    cycle = 0
    try:
        m.initial_sweep()
        while True:
            if m.goal_reached():
                return m.report(True)
            if m.step_index >= settings.step_cap:
                return m.report(False, "step_cap")
            if stagnant >= settings.stagnation_limit:
                return m.report(False, "no_progress")
            m.sweep(math.radians(90.0) * (1 if cycle % 2 == 0 else -1))
            view = planning_view(m.belief)
            cycle += 1
            spec = HorizonSpec(region_index=cycle, goal_point=goal_point,
                               node_budget=settings.llm_motion_budget,
                               goal_tolerance=world.goal_radius)
            t0 = time.perf_counter()
            try:
                mp = plan_motion(view, m.pose, spec, settings.motion,
                                 best_effort=True)
            except (NoPath, CollisionOnSweep):
                m.planning_time += time.perf_counter() - t0
                recoveries += 1
                if recoveries > settings.recovery_limit:
                    return m.report(False, "no_path")
                m.turn_by(math.radians(60.0))
                continue
            m.planning_time += time.perf_counter() - t0
            m.node_expansions += mp.node_expansions
            _audit_plan(m, mp)
            before = m.pose
            _execute_motion_prefix(m, mp, 0.1)  # exactly one primitive
            moved = m.pose.distance_to((before.x, before.y))
            stagnant = stagnant + 1 if moved < 0.05 else 0
            recoveries = 0
    except _Done:
        return m.report(True)
    except _StepCap:
        return m.report(False, "step_cap")
    except _Collision:
        return m.report(False, "collision")
    except _Aborted:
        return m.report(False, "aborted")


def run_pipeline_llm_only(world: WorldMap, goal: MissionGoal,
                          settings: MissionSettings,
                          observer=None, control=None) -> MissionReport:
    """Open-loop baseline: ground the backend's task list into a fixed
    turn-and-drive sequence and execute it blind (no belief, no replans)."""
    m = _Mission(world, goal, settings, observer, control)
    m.emit("chat", {"role": "system", "text": "mission started",
                    "pipeline": PipelineKind.LLM_ONLY.value})
    t0 = time.perf_counter()
    gx, gy = _resolve_goal_point(goal, world)
    heading = math.atan2(gy - m.pose.y, gx - m.pose.x)
    turn = wrap_angle(heading - m.pose.theta)
    distance = m.pose.distance_to((gx, gy))
    m.planning_time += time.perf_counter() - t0
    try:
        for name, params in goal.tasks:
            if name == "perception":
                m.scan_here()
            elif name in ("turn_left", "turn_right"):
                # Grounded by the straight-to-goal bearing; the canned
                # sequence carries no numeric angles.
                if (turn > 0) == (name == "turn_left"):
                    m.turn_by(turn, tolerate_collision=False)
                    turn = 0.0
            elif name == "move_forward":
                if turn != 0.0:
                    m.turn_by(turn)
                    turn = 0.0
                m.advance_by((params or {}).get("distance", distance))
            elif name == "check":
                m.scan_here()  # sensed but, open-loop, never acted upon
        return m.report(m.goal_reached(),
                        None if m.goal_reached() else "goal_not_reached")
    except _Done:
        return m.report(True)
    except _StepCap:
        return m.report(False, "step_cap")
    except _Collision:
        return m.report(False, "collision")
    except _Aborted:
        return m.report(False, "aborted")


_PIPELINES = {
    PipelineKind.LLM_ONLY: run_pipeline_llm_only,
    PipelineKind.LLM_MOTION: run_pipeline_llm_motion,
    PipelineKind.LLM_TASK_MOTION: run_pipeline_llm_task_motion,
}


def run_mission(world: WorldMap, goal: MissionGoal, pipeline: PipelineKind,
                settings: MissionSettings | None = None,
                observer=None, control=None) -> MissionReport:
    """Run one mission; failures are encoded in the report, never raised."""
    settings = settings or MissionSettings()
    return _PIPELINES[PipelineKind(pipeline)](world, goal, settings,
                                              observer, control)


# --- benchmark ---

def run_benchmark(seeds, pipelines, goal: MissionGoal,
                  settings: MissionSettings | None = None,
                  params: CanyonParams | None = None,
                  progress=None) -> tuple[list[dict], dict]:
    """Seed sweep: one mission per (pipeline, seed).

    Returns (rows, summary). All columns except wall-clock timing are
    deterministic for fixed seeds.
    """
    settings = settings or MissionSettings()
    params = params or CanyonParams()
    rows: list[dict] = []
    for seed in seeds:
        world = generate_canyon(seed, params)
        for pipeline in pipelines:
            pipeline = PipelineKind(pipeline)
            report = run_mission(world, goal, pipeline, settings)
            row = {"pipeline": pipeline.value, "seed": seed,
                   "success": report.success,
                   "planning_time_s": report.planning_time,
                   "node_expansions": report.node_expansions,
                   "path_length_m": round(report.path_length, 3),
                   "replans": report.replan_count,
                   "steps": report.steps,
                   "collisions": report.collision_count,
                   "unknown_waypoints": report.unknown_waypoint_count,
                   "failure_reason": report.failure_reason or ""}
            rows.append(row)
            if progress is not None:
                progress(row)
    summary = {"per_pipeline": {}}
    for pipeline in pipelines:
        sub = [r for r in rows if r["pipeline"] == PipelineKind(pipeline).value]
        summary["per_pipeline"][PipelineKind(pipeline).value] = {
            "missions": len(sub),
            "success_rate": sum(r["success"] for r in sub) / len(sub),
            "mean_planning_time_s": sum(r["planning_time_s"] for r in sub) / len(sub),
            "mean_node_expansions": sum(r["node_expansions"] for r in sub) / len(sub),
            "mean_path_length_m": sum(r["path_length_m"] for r in sub) / len(sub),
            "total_replans": sum(r["replans"] for r in sub),
            "total_collisions": sum(r["collisions"] for r in sub),
            "total_unknown_waypoints": sum(r["unknown_waypoints"] for r in sub),
        }
    return rows, summary
