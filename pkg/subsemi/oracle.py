"""Brute-force checks for the closed-form machinery.

integrate_geodesic runs fixed-step RK4 on the full coupled system

    v'' = eta j(u' + 1/2 [v', v]) v',    u'' = -1/2 [v'', v]

without using the conservation of u' + 1/2 [v', v], so conservation tests
against its output are not circular.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Optional

import numpy as np

from .algebra import GroupElement, HTypeAlgebra, Velocity, a_of_u, bracket, causal_type
from .errors import DimensionMismatchError, InvalidRangeError, NonUniformGridError
from .geodesic import Trajectory

LOGGER = logging.getLogger("subsemi.oracle")

MIN_STEPS = 10
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class IntegratorConfig:
    steps: int = 100_000
    t_end: float = 1.0
    record_every: int = 1

    def __post_init__(self) -> None:
        if self.steps < MIN_STEPS:
            raise InvalidRangeError(f"RK4 needs at least {MIN_STEPS} steps, got {self.steps}")
        if self.t_end <= 0:
            raise InvalidRangeError(f"t_end must be positive, got {self.t_end}")
        if self.record_every < 1 or self.steps % self.record_every:
            raise InvalidRangeError(f"record_every={self.record_every} must divide steps={self.steps}")

    @property
    def h(self) -> float:
        return self.t_end / self.steps


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    """classic 4th order method"""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + h * (k1 / 6 + k2 / 3 + k3 / 3 + k4 / 6)


def _geodesic_field(alg: HTypeAlgebra) -> Callable[[float, np.ndarray], np.ndarray]:
    n, m = alg.n, alg.m
    J = alg.J
    eps = alg.sig.epsilon
    # [x, y]_a = y^T J_a x = ((J @ x) @ y)_a

    def field(_t: float, y: np.ndarray) -> np.ndarray:
        v, du, dv = y[:n], y[2 * n + m :], y[n + m : 2 * n + m]
        w = du + 0.5 * ((J @ dv) @ v)
        ddv = eps * (np.tensordot(w, J, axes=1) @ dv)
        ddu = -0.5 * ((J @ ddv) @ v)
        return np.concatenate([dv, du, ddv, ddu])

    return field


def _initial_state(alg: HTypeAlgebra, v0dot: Any, u0dot: Any) -> np.ndarray:
    v0dot = np.asarray(v0dot, dtype=np.float64)
    u0dot = np.asarray(u0dot, dtype=np.float64)
    if v0dot.shape != (alg.n,) or u0dot.shape != (alg.m,):
        raise DimensionMismatchError(
            f"Initial velocity must have shapes ({alg.n},) and ({alg.m},), got {v0dot.shape} and {u0dot.shape}"
        )
    return np.concatenate([np.zeros(alg.n + alg.m), v0dot, u0dot])


def _final_position(alg: HTypeAlgebra, v0dot: Any, u0dot: Any, steps: int, t_end: float) -> np.ndarray:
    field = _geodesic_field(alg)
    y = _initial_state(alg, v0dot, u0dot)
    h = t_end / steps
    for step in range(steps):
        y = rk4_step(field, step * h, y, h)
    return y[: alg.n + alg.m]


def integrate_geodesic(alg: HTypeAlgebra, v0dot: Any, u0dot: Any, cfg: Optional[IntegratorConfig] = None) -> Trajectory:
    cfg = cfg or IntegratorConfig()
    n, m = alg.n, alg.m
    y = _initial_state(alg, v0dot, u0dot)
    field = _geodesic_field(alg)
    h = cfg.h

    def record(state: np.ndarray) -> None:
        states.append(GroupElement(state[:n].copy(), state[n : n + m].copy()))
        velocities.append(Velocity(state[n + m : 2 * n + m].copy(), state[2 * n + m :].copy()))

    states: List[GroupElement] = []
    velocities: List[Velocity] = []
    record(y)
    for step in range(cfg.steps):
        y = rk4_step(field, step * h, y, h)
        if (step + 1) % cfg.record_every == 0:
            record(y)
    times = np.linspace(0.0, cfg.t_end, cfg.steps // cfg.record_every + 1)
    LOGGER.debug("RK4 oracle: %d steps of h=%.3e, %d samples", cfg.steps, h, len(times))
    return Trajectory(
        times=times,
        states=tuple(states),
        velocities=tuple(velocities),
        causal=causal_type(alg.sig, velocities[0].dv),
    )


def geodesic_residual(alg: HTypeAlgebra, traj: Trajectory) -> float:
    """Max over interior samples of the central-difference residual of the geodesic system."""
    if len(traj) < 3:
        raise InvalidRangeError(f"Residual needs at least 3 samples, got {len(traj)}")
    steps = np.diff(traj.times)
    h = float(np.mean(steps))
    if np.max(np.abs(steps - h)) > GRID_TOLERANCE * max(h, 1.0):
        raise NonUniformGridError("geodesic_residual needs a uniformly spaced time grid")

    positions = traj.positions
    n = alg.n
    first = (positions[2:] - positions[:-2]) / (2 * h)
    second = (positions[2:] - 2 * positions[1:-1] + positions[:-2]) / h**2
    worst = 0.0
    for point, rate, accel in zip(positions[1:-1], first, second):
        v, dv, du = point[:n], rate[:n], rate[n:]
        ddv, ddu = accel[:n], accel[n:]
        horizontal = ddv - a_of_u(alg, du + 0.5 * bracket(alg, dv, v)) @ dv
        vertical = ddu + 0.5 * bracket(alg, ddv, v)
        worst = max(worst, float(np.max(np.abs(horizontal))), float(np.max(np.abs(vertical), initial=0.0)))
    return worst


def convergence_ratio(
    alg: HTypeAlgebra,
    v0dot: Any,
    u0dot: Any,
    steps: int,
    t_end: float = 1.0,
    reference: Optional[np.ndarray] = None,
) -> float:
    """Global error at `steps` divided by the error at 2 * `steps`; close to 16 for a fourth-order method.

    The reference endpoint (v, u) defaults to an RK4 run with 16 * `steps` steps.
    """
    if reference is None:
        reference = _final_position(alg, v0dot, u0dot, 16 * steps, t_end)
    coarse = np.linalg.norm(_final_position(alg, v0dot, u0dot, steps, t_end) - reference)
    fine = np.linalg.norm(_final_position(alg, v0dot, u0dot, 2 * steps, t_end) - reference)
    LOGGER.debug("RK4 errors: %.3e at %d steps, %.3e at %d steps", coarse, steps, fine, 2 * steps)
    return float(coarse / fine)
