"""H-type algebra V + U with an indefinite metric on the horizontal layer V.

Coordinates are exponential: a group element is a pair (v, u) and the
product is the truncated Baker-Campbell-Hausdorff series of a 2-step
nilpotent algebra. The bracket is [v, w]_a = w^T j_a v.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Optional

import numpy as np

from .clifford import GeneratorSet, validate_generators
from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidGeneratorsError,
    SignatureError,
    SubsemiError,
)

LOGGER = logging.getLogger("subsemi.algebra")

DEFAULT_SEED = 20240611
INVARIANT_TOLERANCE = 1e-10
J2_TOLERANCE = 1e-8
LIGHTLIKE_TOLERANCE = 1e-12


class CausalType(str, Enum):
    TIMELIKE = "timelike"
    SPACELIKE = "spacelike"
    LIGHTLIKE = "lightlike"


@dataclass(frozen=True)
class Signature:
    """Index data of eta = diag(-I_p, I_q)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise SignatureError(f"Signature counts must be non-negative, got p={self.p}, q={self.q}")
        if self.n < 2 or self.n % 2:
            raise SignatureError(f"n = p + q must be even and at least 2, got {self.n}")
        if 2 * self.p > self.n:
            raise SignatureError(
                f"Index p={self.p} exceeds n/2={self.n // 2}; negate the metric to study this case"
            )

    @classmethod
    def for_dimension(cls, n: int, p: int) -> "Signature":
        return cls(p=p, q=n - p)

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def epsilon(self) -> np.ndarray:
        return np.concatenate([-np.ones(self.p), np.ones(self.q)])


@dataclass(frozen=True, eq=False)
class GroupElement:
    v: np.ndarray
    u: np.ndarray

    @classmethod
    def of(cls, v: Any, u: Any) -> "GroupElement":
        return cls(np.asarray(v, dtype=np.float64), np.asarray(u, dtype=np.float64))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.v, self.u])


@dataclass(frozen=True, eq=False)
class Velocity:
    dv: np.ndarray
    du: np.ndarray

    @classmethod
    def of(cls, dv: Any, du: Any) -> "Velocity":
        return cls(np.asarray(dv, dtype=np.float64), np.asarray(du, dtype=np.float64))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.dv, self.du])


@dataclass(frozen=True, eq=False)
class HTypeAlgebra:
    """Signature, generators and structure constants B[a, i, j] of [d_vi, d_vj] = sum_a B[a, i, j] d_ua."""

    sig: Signature
    gens: GeneratorSet
    structure: np.ndarray

    @property
    def n(self) -> int:
        return self.gens.n

    @property
    def m(self) -> int:
        return self.gens.m

    @cached_property
    def J(self) -> np.ndarray:
        J = self.gens.as_float()
        J.setflags(write=False)
        return J

    @property
    def eta(self) -> np.ndarray:
        return eta(self.sig)

    @property
    def eta_j(self) -> np.ndarray:
        """The operators eta j_a stacked along the first axis."""
        return self.sig.epsilon[None, :, None] * self.J

    def describe(self) -> Dict[str, Any]:
        return {"n": self.n, "m": self.m, "p": self.sig.p, "q": self.sig.q}


@dataclass(frozen=True)
class J2Report:
    satisfied: bool
    vacuous: bool
    max_residual: float
    trials: int
    seed: int
    tolerance: float = J2_TOLERANCE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "satisfied": self.satisfied,
            "vacuous": self.vacuous,
            "max_residual": self.max_residual,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
        }


def _vector(x: Any, size: int, label: str) -> np.ndarray:
    array = np.asarray(x, dtype=np.float64)
    if array.shape != (size,):
        raise DimensionMismatchError(f"{label} must have shape ({size},), got {array.shape}")
    return array


def eta(sig: Signature) -> np.ndarray:
    return np.diag(sig.epsilon)


def make_algebra(gens: GeneratorSet, sig: Signature, seed: int = DEFAULT_SEED) -> HTypeAlgebra:
    if gens.n != sig.n:
        raise DimensionMismatchError(f"Generators act on R^{gens.n} but signature has n={sig.n}")
    report = validate_generators(gens)
    if not report.passed:
        raise InvalidGeneratorsError(report)

    J = gens.as_float()
    eps = sig.epsilon
    # eta j_a d_vi = sum_j A[a, i, j] d_vj, so A[a] is the transpose of eta j_a
    clifford_coefficients = np.transpose(eps[None, :, None] * J, (0, 2, 1))
    structure = clifford_coefficients * eps[None, None, :]
    alg = HTypeAlgebra(sig=sig, gens=gens, structure=structure)

    # bracket(e_i, e_j)_a = J[a, j, i]
    direct = np.transpose(J, (0, 2, 1))
    if not np.allclose(structure, direct, atol=1e-12, rtol=0.0):
        raise SubsemiError("Structure constants disagree with the bracket w^T j v")
    if not np.allclose(structure, -np.transpose(structure, (0, 2, 1)), atol=1e-12, rtol=0.0):
        raise SubsemiError("Structure constants are not skew in (i, j)")

    rng = np.random.default_rng(seed)
    eye = np.eye(gens.n)
    metric = eta(sig)
    for _ in range(20):
        u = rng.standard_normal(gens.m)
        A = a_of_u(alg, u)
        norm2 = float(u @ u)
        orthogonality = np.max(np.abs(A @ A.T - norm2 * eye), initial=0.0)
        adjointness = np.max(np.abs(metric @ A + A.T @ metric), initial=0.0)
        if max(orthogonality, adjointness) > INVARIANT_TOLERANCE * max(1.0, norm2):
            raise SubsemiError(
                f"eta j(u) violates AA^T = |u|^2 I or eta-skewness (violation {max(orthogonality, adjointness):.3e})"
            )
    LOGGER.debug("Built H-type algebra n=%d m=%d p=%d", gens.n, gens.m, sig.p)
    return alg


def inner_v(sig: Signature, v: Any, w: Any) -> float:
    v = _vector(v, sig.n, "v")
    w = _vector(w, sig.n, "w")
    return float(np.sum(sig.epsilon * v * w))


def causal_type(sig: Signature, v: Any) -> CausalType:
    v = _vector(v, sig.n, "v")
    norm2 = inner_v(sig, v, v)
    scale = float(v @ v)
    if scale == 0.0:
        return CausalType.SPACELIKE
    if abs(norm2) <= LIGHTLIKE_TOLERANCE * scale:
        return CausalType.LIGHTLIKE
    return CausalType.TIMELIKE if norm2 < 0 else CausalType.SPACELIKE


def is_nonspacelike(sig: Signature, v: Any) -> bool:
    return causal_type(sig, v) is not CausalType.SPACELIKE


def j_of_u(alg: HTypeAlgebra, u: Any) -> np.ndarray:
    u = _vector(u, alg.m, "u")
    return np.einsum("a,aij->ij", u, alg.J) if alg.m else np.zeros((alg.n, alg.n))


def a_of_u(alg: HTypeAlgebra, u: Any) -> np.ndarray:
    return alg.sig.epsilon[:, None] * j_of_u(alg, u)


def bracket(alg: HTypeAlgebra, v: Any, w: Any) -> np.ndarray:
    v = _vector(v, alg.n, "v")
    w = _vector(w, alg.n, "w")
    return np.einsum("i,aij,j->a", w, alg.J, v)


def identity(alg: HTypeAlgebra) -> GroupElement:
    return GroupElement(np.zeros(alg.n), np.zeros(alg.m))


def group_multiply(alg: HTypeAlgebra, a: GroupElement, b: GroupElement) -> GroupElement:
    av = _vector(a.v, alg.n, "a.v")
    bv = _vector(b.v, alg.n, "b.v")
    au = _vector(a.u, alg.m, "a.u")
    bu = _vector(b.u, alg.m, "b.u")
    return GroupElement(av + bv, au + bu + 0.5 * bracket(alg, av, bv))


def group_inverse(alg: HTypeAlgebra, a: GroupElement) -> GroupElement:
    return GroupElement(-_vector(a.v, alg.n, "a.v"), -_vector(a.u, alg.m, "a.u"))


def left_translate_velocity(alg: HTypeAlgebra, g: GroupElement, vel: Velocity) -> Velocity:
    """Push a coordinate velocity forward by the differential of left translation by g."""
    dv = _vector(vel.dv, alg.n, "dv")
    du = _vector(vel.du, alg.m, "du")
    return Velocity(dv.copy(), du + 0.5 * bracket(alg, g.v, dv))


def _vertical_correction(alg: HTypeAlgebra, v: np.ndarray) -> np.ndarray:
    # U-coefficients of V_i at v: 1/2 sum_j v_j B[a, j, i] = 1/2 (j_a v)_i
    return 0.5 * np.einsum("aij,j->ai", alg.J, v)


def left_invariant_frame(alg: HTypeAlgebra, at: GroupElement) -> np.ndarray:
    """Columns are V_1..V_n, U_1..U_m in the coordinate basis d_v, d_u at the given point."""
    v = _vector(at.v, alg.n, "at.v")
    size = alg.n + alg.m
    frame = np.eye(size)
    frame[alg.n :, : alg.n] = _vertical_correction(alg, v)
    return frame


def metric_at(alg: HTypeAlgebra, at: GroupElement) -> np.ndarray:
    """Coordinate matrix of the left-invariant metric; the frame is orthonormal for it."""
    v = _vector(at.v, alg.n, "at.v")
    size = alg.n + alg.m
    coframe = np.eye(size)
    coframe[alg.n :, : alg.n] = -_vertical_correction(alg, v)
    frame_metric = np.diag(np.concatenate([alg.sig.epsilon, np.ones(alg.m)]))
    return coframe.T @ frame_metric @ coframe


def connection_on_frame(alg: HTypeAlgebra, x: int, y: int) -> np.ndarray:
    """nabla_X Y for frame indices 0..n-1 (V_i) and n..n+m-1 (U_a), expanded in the frame."""
    size = alg.n + alg.m
    for label, index in (("X", x), ("Y", y)):
        if not 0 <= index < size:
            raise IndexOutOfRangeError(f"Frame index {label}={index} outside 0..{size - 1}")
    result = np.zeros(size)
    x_horizontal = x < alg.n
    y_horizontal = y < alg.n
    if x_horizontal and y_horizontal:
        result[alg.n :] = 0.5 * alg.structure[:, x, y]
    elif x_horizontal != y_horizontal:
        i, alpha = (x, y - alg.n) if x_horizontal else (y, x - alg.n)
        result[: alg.n] = -0.5 * alg.eta_j[alpha][:, i]
    return result


def bracket_generating_singular_values(alg: HTypeAlgebra, at: GroupElement) -> np.ndarray:
    """Singular values of the span of {V_i(at)} and {[V_i, V_j](at)}, descending."""
    frame = left_invariant_frame(alg, at)
    columns = [frame[:, i] for i in range(alg.n)]
    for i in range(alg.n):
        for j in range(i + 1, alg.n):
            columns.append(np.concatenate([np.zeros(alg.n), alg.structure[:, i, j]]))
    return np.linalg.svd(np.column_stack(columns), compute_uv=False)


def check_j2_condition(alg: HTypeAlgebra, trials: int = 20, seed: Optional[int] = None) -> J2Report:
    """Test whether j(u1) j(u2) v lies in {j(u3) v} for random u1 orthogonal to u2."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    seed = DEFAULT_SEED if seed is None else seed
    if alg.m < 2:
        return J2Report(satisfied=True, vacuous=True, max_residual=0.0, trials=trials, seed=seed)

    rng = np.random.default_rng(seed)
    J = alg.J
    worst = 0.0
    for _ in range(trials):
        u1 = rng.standard_normal(alg.m)
        u2 = rng.standard_normal(alg.m)
        u2 -= (u2 @ u1) / (u1 @ u1) * u1
        v = rng.standard_normal(alg.n)
        target = j_of_u(alg, u1) @ (j_of_u(alg, u2) @ v)
        span = np.einsum("aij,j->ia", J, v)
        solution, *_ = np.linalg.lstsq(span, target, rcond=None)
        residual = float(np.linalg.norm(span @ solution - target) / np.linalg.norm(target))
        worst = max(worst, residual)
    satisfied = worst <= J2_TOLERANCE
    LOGGER.debug("j^2 condition n=%d m=%d: max residual %.3e", alg.n, alg.m, worst)
    return J2Report(satisfied=satisfied, vacuous=False, max_residual=worst, trials=trials, seed=seed)
