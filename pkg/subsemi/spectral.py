"""Spectrum of the geodesic operator A = eta j(u) and its real block form.

A / |u| is orthogonal, so the real Schur form of A is block diagonal. Its
1x1 blocks are the real eigenvalues +-|u|, its 2x2 blocks either carry a
purely imaginary pair +-i|u| or one half of a quartet +-(alpha +- i beta).
The transform T = Ptilde @ P takes A to the canonical block matrix

    Dtilde = T A T^T = diag(|u| D1 (s times), |u| D2 (r - s times),
                            [[a, b], [-b, a]], [[-a, -b], [b, -a]] per quartet)

with D1 = [[0, 1], [1, 0]] and D2 = [[0, 1], [-1, 0]].
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from .algebra import HTypeAlgebra, a_of_u
from .errors import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotSkewSymmetricError,
    SizeLimitExceededError,
    SpectralError,
    ZeroCenterVelocityError,
)

LOGGER = logging.getLogger("subsemi.spectral")

BUCKET_TOLERANCE = 1e-8
PAIRING_TOLERANCE = 1e-7
SKEW_TOLERANCE = 1e-10
MINOR_SUM_LIMIT = 12

RESIDUAL_TOLERANCES = {
    "reconstruction": 1e-9,
    # a bucketed block differs from its measured Schur block by at most the bucket tolerance
    "block_idealization": 2 * BUCKET_TOLERANCE,
    "orthogonality": 1e-10,
    "dtilde_gram": 1e-9,
    "quartet_modulus": 1e-9,
    "eigenvalue_modulus": 1e-9,
}

HYPERBOLIC = "hyperbolic"
CIRCULAR = "circular"
SPIRAL_OUT = "spiral_out"
SPIRAL_IN = "spiral_in"

D1 = np.array([[0.0, 1.0], [1.0, 0.0]])
D2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True, eq=False)
class SpectralBlock:
    """A 2x2 diagonal block of Dtilde occupying rows start, start + 1."""

    kind: str
    start: int
    matrix: np.ndarray

    @property
    def scale(self) -> float:
        """|u|^2, the squared modulus of the block's eigenvalues."""
        return float(self.matrix[0, 0] ** 2 + self.matrix[0, 1] ** 2)

    def exponential(self, t: float) -> np.ndarray:
        return block_exponential(self, t)


@dataclass(frozen=True, eq=False)
class SpectralData:
    u_norm: float
    s: int
    r: int
    quartets: Tuple[Tuple[float, float], ...]
    P: np.ndarray
    Ptilde: np.ndarray
    Dtilde: np.ndarray
    eigenvalues: np.ndarray
    blocks: Tuple[SpectralBlock, ...]
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.quartets)

    @property
    def transform(self) -> np.ndarray:
        """T = Ptilde P, orthogonal; v = T^T vtilde."""
        return self.Ptilde @ self.P

    @property
    def passed(self) -> bool:
        return all(self.residuals.get(name, 0.0) <= tol for name, tol in RESIDUAL_TOLERANCES.items())

    def failed_residuals(self) -> List[str]:
        return [name for name, tol in RESIDUAL_TOLERANCES.items() if self.residuals.get(name, 0.0) > tol]


def char_poly(A: Any) -> np.ndarray:
    """Coefficients of det(lambda I - A), highest degree first."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"Characteristic polynomial needs a square matrix, got {A.shape}")
    return np.real(np.poly(A))


def char_poly_oracle(A: Any) -> np.ndarray:
    """Same coefficients from sums of principal minors: c_k = (-1)^k sum of k x k minors."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"Characteristic polynomial needs a square matrix, got {A.shape}")
    n = A.shape[0]
    if n > MINOR_SUM_LIMIT:
        raise SizeLimitExceededError(f"Principal-minor expansion is limited to n <= {MINOR_SUM_LIMIT}, got n={n}")
    coefficients = np.zeros(n + 1)
    coefficients[0] = 1.0
    for k in range(1, n + 1):
        total = 0.0
        for idx in itertools.combinations(range(n), k):
            total += np.linalg.det(A[np.ix_(idx, idx)])
        coefficients[k] = (-1) ** k * total
    return coefficients


def relative_coefficient_error(coefficients: Sequence[float], reference: Sequence[float], scale: float) -> float:
    """max_k |c_k - ref_k| / max(|ref_k|, scale^k), the coefficient of lambda^(n-k) scaling like scale^k."""
    c = np.asarray(coefficients, dtype=np.float64)
    ref = np.asarray(reference, dtype=np.float64)
    if c.shape != ref.shape:
        raise DimensionMismatchError(f"Coefficient lists differ in length: {c.shape} vs {ref.shape}")
    natural = np.maximum(np.abs(ref), float(scale) ** np.arange(len(ref)))
    return float(np.max(np.abs(c - ref) / natural))


def octonion_char_poly(p: int, u: Any) -> np.ndarray:
    """Closed-form characteristic polynomial of eta j(u) on the octonion algebra for index p = 1..4."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (7,):
        raise DimensionMismatchError(f"Octonion center is 7-dimensional, got u of shape {u.shape}")
    x = float(u @ u)
    b2 = float(u[:3] @ u[:3])
    a2 = float(u[3:] @ u[3:])
    if p == 1:
        return np.array([1.0, 0.0, 2 * x, 0.0, 0.0, 0.0, -2 * x**3, 0.0, -(x**4)])
    if p == 2:
        imaginary = np.array([1.0, 0.0, x])
        quartet = np.array([1.0, 0.0, -2 * (x - 2 * u[0] ** 2), 0.0, x**2])
        return np.polymul(np.polymul(imaginary, imaginary), quartet)
    if p == 3:
        c = b2 - a2
        return np.array([1.0, 0.0, 2 * c, 0.0, 0.0, 0.0, -2 * x**2 * c, 0.0, -(x**4)])
    if p == 4:
        quartet = np.array([1.0, 0.0, -2 * (a2 - b2), 0.0, x**2])
        return np.polymul(quartet, quartet)
    raise ValueError(f"Octonion index p must be in 1..4, got {p}")


def _normalize_sign(vector: np.ndarray) -> np.ndarray:
    # first significant component positive
    significant = np.abs(vector) > 1e-8 * np.max(np.abs(vector))
    pivot = int(np.argmax(significant))
    return vector if vector[pivot] >= 0 else -vector


def _ideal_block(kind: str, norm: float, alpha: float = 0.0, beta: float = 0.0) -> np.ndarray:
    if kind == HYPERBOLIC:
        return norm * D1
    if kind == CIRCULAR:
        return norm * D2
    if kind == SPIRAL_OUT:
        return np.array([[alpha, beta], [-beta, alpha]])
    return np.array([[-alpha, -beta], [beta, -alpha]])


def classify_spectrum(alg: HTypeAlgebra, u: Any) -> SpectralData:
    """Group the spectrum of eta j(u) into real pairs, imaginary pairs and quartets."""
    A = a_of_u(alg, u)
    u = np.asarray(u, dtype=np.float64)
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        raise ZeroCenterVelocityError()
    n = alg.n
    tol = BUCKET_TOLERANCE * norm

    schur_form, vectors = scipy.linalg.schur(A, output="real")
    rows = vectors.T.copy()
    signs = np.ones(n)
    positive: List[int] = []
    negative: List[int] = []
    imaginary: List[Tuple[int, float]] = []
    halves_out: List[Tuple[int, float, float]] = []
    halves_in: List[Tuple[int, float, float]] = []

    i = 0
    while i < n:
        if i + 1 < n and schur_form[i + 1, i] != 0.0:
            a = 0.5 * (schur_form[i, i] + schur_form[i + 1, i + 1])
            b = schur_form[i, i + 1]
            c = schur_form[i + 1, i]
            beta = float(np.sqrt(max(-b * c, 0.0)))
            if beta <= tol and abs(a) > tol:
                # double real eigenvalue split off as a 2x2 block by rounding
                for index in (i, i + 1):
                    rows[index] = _normalize_sign(rows[index])
                    (positive if a > 0 else negative).append(index)
                i += 2
                continue
            if abs(a) <= tol:
                if b < 0:
                    signs[i + 1] = -1.0
                imaginary.append((i, beta))
            elif a > 0:
                if b < 0:
                    signs[i + 1] = -1.0
                halves_out.append((i, float(a), beta))
            else:
                if b > 0:
                    signs[i + 1] = -1.0
                halves_in.append((i, float(-a), beta))
            i += 2
            continue
        eigenvalue = schur_form[i, i]
        if abs(abs(eigenvalue) - norm) > PAIRING_TOLERANCE * norm:
            raise SpectralError(f"Real eigenvalue {eigenvalue:.6g} does not have modulus |u| = {norm:.6g}")
        rows[i] = _normalize_sign(rows[i])
        (positive if eigenvalue > 0 else negative).append(i)
        i += 1

    if len(positive) != len(negative):
        raise SpectralError(f"Unbalanced real spectrum: {len(positive)} eigenvalues +|u|, {len(negative)} eigenvalues -|u|")

    order: List[int] = []
    kinds: List[Tuple[str, float, float]] = []
    s = len(positive) % 2
    if s:
        plus, minus = positive.pop(0), negative.pop(0)
        mixed_plus = (rows[plus] + rows[minus]) / np.sqrt(2.0)
        mixed_minus = (rows[plus] - rows[minus]) / np.sqrt(2.0)
        rows[plus], rows[minus] = mixed_plus, mixed_minus
        order += [plus, minus]
        kinds.append((HYPERBOLIC, 0.0, 0.0))

    for start, _beta in imaginary:
        order += [start, start + 1]
        kinds.append((CIRCULAR, 0.0, 0.0))

    # leftover real eigenvectors pair up into quartets with beta = 0
    halves_out += [(pair, norm, 0.0) for pair in zip(positive[0::2], positive[1::2])]
    halves_in += [(pair, norm, 0.0) for pair in zip(negative[0::2], negative[1::2])]
    if len(halves_out) != len(halves_in):
        raise SpectralError(f"Cannot pair {len(halves_out)} expanding with {len(halves_in)} contracting blocks")
    halves_out.sort(key=lambda half: half[2])
    halves_in.sort(key=lambda half: half[2])

    def _indices(start: Any) -> List[int]:
        return list(start) if isinstance(start, tuple) else [start, start + 1]

    quartets: List[Tuple[float, float]] = []
    for (start_out, a_out, b_out), (start_in, a_in, b_in) in zip(halves_out, halves_in):
        if abs(b_out - b_in) > PAIRING_TOLERANCE * norm or abs(a_out - a_in) > PAIRING_TOLERANCE * norm:
            raise SpectralError(
                f"Quartet halves do not match: ({a_out:.6g}, {b_out:.6g}) vs ({a_in:.6g}, {b_in:.6g})"
            )
        alpha, beta = 0.5 * (a_out + a_in), 0.5 * (b_out + b_in)
        quartets.append((alpha, beta))
        order += _indices(start_out)
        kinds.append((SPIRAL_OUT, alpha, beta))
        order += _indices(start_in)
        kinds.append((SPIRAL_IN, alpha, beta))

    if sorted(order) != list(range(n)):
        raise SpectralError("Block bookkeeping does not cover every Schur vector exactly once")

    P = rows
    Ptilde = np.zeros((n, n))
    for position, source in enumerate(order):
        Ptilde[position, source] = signs[source]

    Dtilde = np.zeros((n, n))
    blocks = []
    for index, (kind, alpha, beta) in enumerate(kinds):
        start = 2 * index
        matrix = _ideal_block(kind, norm, alpha, beta)
        Dtilde[start : start + 2, start : start + 2] = matrix
        blocks.append(SpectralBlock(kind=kind, start=start, matrix=matrix))

    eigenvalues = np.sort_complex(np.linalg.eigvals(A))
    T = Ptilde @ P
    measured = T @ A @ T.T
    block_mask = np.kron(np.eye(n // 2), np.ones((2, 2))).astype(bool)
    measured_blocks = np.where(block_mask, measured, 0.0)
    residuals = {
        "reconstruction": float(np.linalg.norm(A - T.T @ measured_blocks @ T, 2) / norm),
        "block_idealization": float(np.linalg.norm(measured_blocks - Dtilde, 2) / norm),
        "orthogonality": float(np.max(np.abs(P.T @ P - np.eye(n)))),
        "dtilde_gram": float(np.max(np.abs(Dtilde @ Dtilde.T - norm**2 * np.eye(n))) / norm**2),
        "quartet_modulus": max((abs(a * a + b * b - norm**2) / norm**2 for a, b in quartets), default=0.0),
        "eigenvalue_modulus": float(np.max(np.abs(np.abs(eigenvalues) - norm)) / norm),
    }
    r = s + len(imaginary)
    LOGGER.debug("Classified |u|=%.6g: s=%d r=%d quartets=%d", norm, s, r, len(quartets))
    return SpectralData(
        u_norm=norm,
        s=s,
        r=r,
        quartets=tuple(quartets),
        P=P,
        Ptilde=Ptilde,
        Dtilde=Dtilde,
        eigenvalues=eigenvalues,
        blocks=tuple(blocks),
        residuals=residuals,
    )


def canonical_skew_form(J: Any) -> Tuple[np.ndarray, np.ndarray]:
    """Return (Q, mu) with J = Q Jtilde Q^T, Jtilde = diag(mu_k [[0, 1], [-1, 0]]) and mu_k >= 0."""
    J = np.asarray(J, dtype=np.float64)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
        raise DimensionMismatchError(f"Canonical skew form needs an even-sized square matrix, got {J.shape}")
    n = J.shape[0]
    violation = float(np.max(np.abs(J + J.T), initial=0.0))
    if violation > SKEW_TOLERANCE * max(1.0, float(np.max(np.abs(J), initial=0.0))):
        raise NotSkewSymmetricError(f"Matrix is not skew-symmetric (max |J + J^T| = {violation:.3e})")
    if not np.any(J):
        return np.eye(n), np.zeros(n // 2)

    schur_form, vectors = scipy.linalg.schur(J, output="real")
    columns: List[np.ndarray] = []
    mu: List[float] = []
    kernel: List[np.ndarray] = []
    i = 0
    while i < n:
        if i + 1 < n and schur_form[i + 1, i] != 0.0:
            first, second = vectors[:, i], vectors[:, i + 1]
            if schur_form[i, i + 1] < 0:
                second = -second
            columns += [first, second]
            mu.append(float(np.sqrt(max(-schur_form[i, i + 1] * schur_form[i + 1, i], 0.0))))
            i += 2
        else:
            kernel.append(vectors[:, i])
            i += 1
    for first, second in zip(kernel[0::2], kernel[1::2]):
        columns += [first, second]
        mu.append(0.0)
    return np.column_stack(columns), np.array(mu)


def eta_j_alpha_spectrum(alg: HTypeAlgebra, alpha: int) -> np.ndarray:
    """Eigenvalues of eta j_alpha (alpha is 1-based), sorted."""
    if not 1 <= alpha <= alg.m:
        raise IndexOutOfRangeError(f"Generator index alpha={alpha} outside 1..{alg.m}")
    return np.sort_complex(np.linalg.eigvals(alg.eta_j[alpha - 1]))


def eta_commutation(alg: HTypeAlgebra, alpha: int) -> int:
    """+1 if j_alpha commutes with eta, -1 if it anticommutes, 0 otherwise (alpha is 1-based).

    eta j_alpha eta j_beta = (eta j_alpha eta) j_beta, so eta j_alpha and eta j_beta
    anticommute whenever both generators fall in the same nonzero class.
    A commuting j_alpha gives (eta j_alpha)^2 = -I, an anticommuting one +I.
    """
    if not 1 <= alpha <= alg.m:
        raise IndexOutOfRangeError(f"Generator index alpha={alpha} outside 1..{alg.m}")
    J = alg.J[alpha - 1]
    left, right = alg.eta @ J, J @ alg.eta
    if np.allclose(left, right, rtol=0.0, atol=SKEW_TOLERANCE):
        return 1
    if np.allclose(left, -right, rtol=0.0, atol=SKEW_TOLERANCE):
        return -1
    return 0


def block_exponential(block: SpectralBlock, t: float) -> np.ndarray:
    """Closed-form exp(M t) for a 2x2 block M of Dtilde."""
    a, b = float(block.matrix[0, 0]), float(block.matrix[0, 1])
    if block.kind == HYPERBOLIC:
        return np.cosh(b * t) * np.eye(2) + np.sinh(b * t) * D1
    # circular and spiral blocks are a I + b D2
    return np.exp(a * t) * (np.cos(b * t) * np.eye(2) + np.sin(b * t) * D2)


def spectrum_report(alg: HTypeAlgebra, u: Any) -> Dict[str, Any]:
    data = classify_spectrum(alg, u)
    return {
        **alg.describe(),
        "u": [float(x) for x in np.asarray(u, dtype=np.float64)],
        "u_norm": data.u_norm,
        "s": data.s,
        "r": data.r,
        "k": data.k,
        "quartets": [[alpha, beta] for alpha, beta in data.quartets],
        "blocks": [block.kind for block in data.blocks],
        "eigenvalues": [[float(z.real), float(z.imag)] for z in data.eigenvalues],
        "residuals": data.residuals,
        "passed": data.passed,
    }
