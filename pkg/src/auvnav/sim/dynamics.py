"""Unicycle kinematics: closed-form constant-control arc integration."""

from __future__ import annotations

import math

from .types import AuvState, ControlInput, SimConfig, wrap_angle

# Below this turning rate the arc update degenerates numerically; switch
# to the straight-line limit.
OMEGA_EPS = 1e-6


def step(state: AuvState, control: ControlInput, dt: float,
         config: SimConfig | None = None) -> AuvState:
    """Advance the pose by one constant-control interval.

    Exact arc update for |omega| >= OMEGA_EPS, straight-line limit
    otherwise. Heading is renormalized to (-pi, pi].
    """
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError("dt must be positive and finite")
    if config is not None:
        config.validate_control(control)

    v, w = control.v, control.omega
    if abs(w) >= OMEGA_EPS:
        x = state.x + (v / w) * (math.sin(state.theta + w * dt) - math.sin(state.theta))
        y = state.y - (v / w) * (math.cos(state.theta + w * dt) - math.cos(state.theta))
        theta = state.theta + w * dt
    else:
        x = state.x + v * dt * math.cos(state.theta)
        y = state.y + v * dt * math.sin(state.theta)
        theta = state.theta + w * dt
    return AuvState(x, y, wrap_angle(theta))
