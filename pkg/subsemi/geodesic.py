"""Closed-form geodesics through the identity.

With the momentum u' + 1/2 [v', v] conserved and equal to u0', the
horizontal part solves v'' = A v' with A = eta j(u0'). In the Dtilde basis
every 2x2 block M evolves independently:

    vtilde'(t) = exp(M t) w,    vtilde(t) = M^-1 (exp(M t) - I) w,

where w is the initial velocity in that basis and M^-1 = M^T / |u|^2. The
vertical part is u(t) = u0' t - 1/2 int_0^t [v', v] by adaptive quadrature.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad_vec

from .algebra import (
    CausalType,
    GroupElement,
    HTypeAlgebra,
    Velocity,
    bracket,
    causal_type,
    group_multiply,
    inner_v,
    left_translate_velocity,
)
from .errors import DimensionMismatchError, InvalidRangeError, ZeroCenterVelocityError
from .spectral import CIRCULAR, HYPERBOLIC, SpectralBlock, SpectralData, block_exponential, classify_spectrum

LOGGER = logging.getLogger("subsemi.geodesic")

PROJECTION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QuadraturePolicy:
    """Settings handed to scipy.integrate.quad_vec for the vertical component."""

    epsabs: float = 1e-10
    epsrel: float = 0.0
    limit: int = 200
    rule: str = "gk21"

    def to_dict(self) -> Dict[str, Any]:
        return {"epsabs": self.epsabs, "epsrel": self.epsrel, "limit": self.limit, "rule": self.rule}


@dataclass(frozen=True, eq=False)
class GeodesicSolution:
    alg: HTypeAlgebra
    v0dot: np.ndarray
    u0dot: np.ndarray
    spec: Optional[SpectralData]
    transformed_v0dot: Optional[np.ndarray]
    vertical_quadrature: QuadraturePolicy = field(default_factory=QuadraturePolicy)

    @property
    def is_straight(self) -> bool:
        return self.spec is None

    @property
    def causal(self) -> CausalType:
        return causal_type(self.alg.sig, self.v0dot)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: Tuple[GroupElement, ...]
    velocities: Tuple[Velocity, ...]
    causal: CausalType

    def __post_init__(self) -> None:
        if not len(self.times) == len(self.states) == len(self.velocities):
            raise DimensionMismatchError(
                f"Trajectory columns differ in length: {len(self.times)} times, "
                f"{len(self.states)} states, {len(self.velocities)} velocities"
            )
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise InvalidRangeError("Trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def positions(self) -> np.ndarray:
        """Rows (v, u) per sample."""
        return np.array([state.as_array() for state in self.states])

    @property
    def rates(self) -> np.ndarray:
        """Rows (dv, du) per sample."""
        return np.array([vel.as_array() for vel in self.velocities])


@dataclass(frozen=True)
class ProjectionResidual:
    block: int
    kind: str
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual <= PROJECTION_TOLERANCE


def _vector(x: Any, size: int, label: str) -> np.ndarray:
    array = np.asarray(x, dtype=np.float64)
    if array.shape != (size,):
        raise DimensionMismatchError(f"{label} must have shape ({size},), got {array.shape}")
    return array


def solve_geodesic(
    alg: HTypeAlgebra,
    v0dot: Any,
    u0dot: Any,
    quadrature: Optional[QuadraturePolicy] = None,
) -> GeodesicSolution:
    v0dot = _vector(v0dot, alg.n, "v0dot")
    u0dot = _vector(u0dot, alg.m, "u0dot")
    policy = quadrature or QuadraturePolicy()
    if not np.any(u0dot):
        LOGGER.debug("u0dot = 0: straight-line geodesic")
        return GeodesicSolution(alg, v0dot, u0dot, None, None, policy)
    spec = classify_spectrum(alg, u0dot)
    transformed = spec.transform @ v0dot
    LOGGER.debug("Geodesic blocks: %s", ", ".join(block.kind for block in spec.blocks))
    return GeodesicSolution(alg, v0dot, u0dot, spec, transformed, policy)


def _transformed(sol: GeodesicSolution, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Position and velocity in the Dtilde basis."""
    position = np.zeros(sol.alg.n)
    rate = np.zeros(sol.alg.n)
    for block in sol.spec.blocks:
        window = slice(block.start, block.start + 2)
        w = sol.transformed_v0dot[window]
        expm = block_exponential(block, t)
        rate[window] = expm @ w
        position[window] = block.matrix.T @ (expm - np.eye(2)) @ w / block.scale
    return position, rate


def _horizontal(sol: GeodesicSolution, t: float) -> Tuple[np.ndarray, np.ndarray]:
    if sol.is_straight:
        return t * sol.v0dot, sol.v0dot.copy()
    position, rate = _transformed(sol, t)
    T = sol.spec.transform
    return T.T @ position, T.T @ rate


def _bracket_integral(sol: GeodesicSolution, a: float, b: float) -> np.ndarray:
    """int_a^b [v'(tau), v(tau)] dtau."""
    if a == b or sol.is_straight:
        return np.zeros(sol.alg.m)
    if b < a:
        return -_bracket_integral(sol, b, a)

    def integrand(tau: float) -> np.ndarray:
        position, rate = _horizontal(sol, tau)
        return bracket(sol.alg, rate, position)

    policy = sol.vertical_quadrature
    value, error = quad_vec(
        integrand, a, b, epsabs=policy.epsabs, epsrel=policy.epsrel, limit=policy.limit, quadrature=policy.rule
    )
    if error > policy.epsabs:
        LOGGER.warning("Vertical quadrature on [%g, %g] reports error %.3e above %.1e", a, b, error, policy.epsabs)
    return value


def _vertical_rate(sol: GeodesicSolution, position: np.ndarray, rate: np.ndarray) -> np.ndarray:
    if sol.is_straight:
        return sol.u0dot.copy()
    return sol.u0dot - 0.5 * bracket(sol.alg, rate, position)


def evaluate(sol: GeodesicSolution, t: float) -> Tuple[GroupElement, Velocity]:
    t = float(t)
    position, rate = _horizontal(sol, t)
    u = sol.u0dot * t - 0.5 * _bracket_integral(sol, 0.0, t)
    return GroupElement(position, u), Velocity(rate, _vertical_rate(sol, position, rate))


def sample(sol: GeodesicSolution, t0: float, t1: float, steps: int) -> Trajectory:
    """Evaluate on a uniform grid; the vertical integral is accumulated interval by interval."""
    if steps < 2:
        raise InvalidRangeError(f"Sampling needs at least 2 points, got {steps}")
    if not t0 < t1:
        raise InvalidRangeError(f"Sampling range must satisfy t0 < t1, got [{t0}, {t1}]")
    times = np.linspace(t0, t1, steps)
    states: List[GroupElement] = []
    velocities: List[Velocity] = []
    integral = _bracket_integral(sol, 0.0, float(times[0]))
    previous = float(times[0])
    for t in times:
        t = float(t)
        integral = integral + _bracket_integral(sol, previous, t)
        previous = t
        position, rate = _horizontal(sol, t)
        states.append(GroupElement(position, sol.u0dot * t - 0.5 * integral))
        velocities.append(Velocity(rate, _vertical_rate(sol, position, rate)))
    return Trajectory(times=times, states=tuple(states), velocities=tuple(velocities), causal=sol.causal)


def momentum(alg: HTypeAlgebra, state: GroupElement, vel: Velocity) -> np.ndarray:
    v = _vector(state.v, alg.n, "state.v")
    dv = _vector(vel.dv, alg.n, "dv")
    du = _vector(vel.du, alg.m, "du")
    return du + 0.5 * bracket(alg, dv, v)


def speed_squared(alg: HTypeAlgebra, vel: Velocity, at: Optional[GroupElement] = None) -> float:
    """<dv, dv>_V + |du + 1/2 [dv, at.v]|^2, the left-invariant squared speed at `at` (identity by default)."""
    dv = _vector(vel.dv, alg.n, "dv")
    du = _vector(vel.du, alg.m, "du")
    vertical = du if at is None else du + 0.5 * bracket(alg, dv, at.v)
    return inner_v(alg.sig, dv, dv) + float(vertical @ vertical)


def block_projections(sol: GeodesicSolution, t: float) -> List[np.ndarray]:
    """Per-block 2D coordinates of v(t) in the Dtilde basis."""
    if sol.is_straight:
        raise ZeroCenterVelocityError("Straight-line geodesics have no block projections")
    position, _ = _transformed(sol, float(t))
    return [position[block.start : block.start + 2].copy() for block in sol.spec.blocks]


def _pole(block: SpectralBlock, w: np.ndarray) -> np.ndarray:
    # vtilde - pole = M^T exp(M t) w / |u|^2
    return -block.matrix.T @ w / block.scale


def _relative(lhs: float, rhs: float, magnitude: float) -> float:
    scale = max(abs(lhs), abs(rhs), magnitude)
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def projection_residuals(sol: GeodesicSolution, t: float) -> List[ProjectionResidual]:
    """Relative residual of the hyperbola, circle or logarithmic-spiral identity of every block."""
    if sol.is_straight:
        raise ZeroCenterVelocityError("Projection identities need u0dot != 0")
    t = float(t)
    residuals = []
    for index, (block, point) in enumerate(zip(sol.spec.blocks, block_projections(sol, t))):
        w = sol.transformed_v0dot[block.start : block.start + 2]
        d = point - _pole(block, w)
        magnitude = float(d @ d)
        if block.kind == HYPERBOLIC:
            lhs = d[0] ** 2 - d[1] ** 2
            rhs = (w[1] ** 2 - w[0] ** 2) / block.scale
        else:
            lhs = magnitude
            rhs = float(w @ w) * np.exp(2 * block.matrix[0, 0] * t) / block.scale
        residuals.append(ProjectionResidual(block=index, kind=block.kind, residual=_relative(lhs, rhs, magnitude)))
    return residuals


def reference_curve(sol: GeodesicSolution, block_index: int, t0: float, t1: float, points: int = 400) -> np.ndarray:
    """Analytic curve through the block's projection: hyperbola, circle or logarithmic spiral about the pole."""
    if sol.is_straight:
        raise ZeroCenterVelocityError("Straight-line geodesics have no reference curves")
    block = sol.spec.blocks[block_index]
    w = sol.transformed_v0dot[block.start : block.start + 2]
    pole = _pole(block, w)
    start = -pole
    rate, turn = float(block.matrix[0, 0]), float(block.matrix[0, 1])
    span = t1 - t0
    taus = np.linspace(t0 - 0.1 * span, t1 + 0.1 * span, points)
    if block.kind == HYPERBOLIC:
        # d1^2 - d2^2 is constant; param by hyperbolic angle
        c, s = np.cosh(turn * taus), np.sinh(turn * taus)
        offsets = np.column_stack([c * start[0] + s * start[1], s * start[0] + c * start[1]])
        return pole + offsets
    if block.kind == CIRCULAR:
        angles = np.linspace(0.0, 2 * np.pi, points)
        radius = float(np.linalg.norm(start))
        return pole + radius * np.column_stack([np.cos(angles), np.sin(angles)])
    radius = float(np.linalg.norm(start)) * np.exp(rate * taus)
    phase = np.arctan2(start[1], start[0]) - turn * taus
    return pole + np.column_stack([radius * np.cos(phase), radius * np.sin(phase)])


def translate_trajectory(alg: HTypeAlgebra, g: GroupElement, traj: Trajectory) -> Trajectory:
    """Left-translate every sample of a trajectory by g."""
    states = tuple(group_multiply(alg, g, state) for state in traj.states)
    velocities = tuple(left_translate_velocity(alg, g, vel) for vel in traj.velocities)
    return Trajectory(times=traj.times.copy(), states=states, velocities=velocities, causal=traj.causal)


def drift_summary(alg: HTypeAlgebra, traj: Trajectory, u0dot: Sequence[float]) -> Dict[str, float]:
    """Max deviation of momentum from u0dot and of the squared speed from its initial value."""
    u0dot = _vector(u0dot, alg.m, "u0dot")
    momenta = np.array([momentum(alg, s, vel) for s, vel in zip(traj.states, traj.velocities)])
    speeds = np.array([speed_squared(alg, vel, at=s) for s, vel in zip(traj.states, traj.velocities)])
    return {
        "momentum_drift": float(np.max(np.abs(momenta - u0dot), initial=0.0)),
        "speed_drift": float(np.max(np.abs(speeds - speeds[0]), initial=0.0)),
    }
