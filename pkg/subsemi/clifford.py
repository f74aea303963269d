"""Clifford-module generators: anti-commuting skew square roots of -I.

Constructed sets are signed permutation matrices built from strings of the
real 2x2 matrices I, E, X, Z, so every check on them is exact.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .errors import AdmissibilityError, DimensionMismatchError

LOGGER = logging.getLogger("subsemi.clifford")

VALIDATION_TOLERANCE = 1e-12

_PAULI = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.int64),
    "E": np.array([[0, 1], [-1, 0]], dtype=np.int64),
    "X": np.array([[0, 1], [1, 0]], dtype=np.int64),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.int64),
}

# Maximal sets for 2**s dimensions, s = 0..3. Each word has an odd number
# of E factors (skew, squares to -I) and any two words differ in an odd
# number of non-identity positions (anti-commute).
_BASE_WORDS: Tuple[Tuple[str, ...], ...] = (
    (),
    ("E",),
    ("EI", "XE", "ZE"),
    ("XEI", "XXE", "XZE", "EII", "ZIE", "ZEX", "ZEZ"),
)

# j(u) for octonion multiplication: entry k means +u_k, -k means -u_k.
_OCTONION_TABLE = (
    (0, 1, 2, 3, 4, 5, 6, 7),
    (-1, 0, 3, -2, 5, -4, -7, 6),
    (-2, -3, 0, 1, 6, 7, -4, -5),
    (-3, 2, -1, 0, 7, -6, 5, -4),
    (-4, -5, -6, -7, 0, 1, 2, 3),
    (-5, 4, -7, 6, -1, 0, -3, 2),
    (-6, 7, 4, -5, -2, 3, 0, -1),
    (-7, -6, 5, 4, -3, -2, 1, 0),
)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Ordered Clifford generators J_1..J_m acting on R^n."""

    n: int
    m: int
    matrices: np.ndarray

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2:
            raise DimensionMismatchError(f"Horizontal dimension must be a positive even integer, got n={self.n}")
        if self.matrices.shape != (self.m, self.n, self.n):
            raise DimensionMismatchError(
                f"Expected {self.m} matrices of shape {self.n}x{self.n}, got array of shape {self.matrices.shape}"
            )
        self.matrices.setflags(write=False)

    @property
    def is_integral(self) -> bool:
        return np.issubdtype(self.matrices.dtype, np.integer)

    def as_float(self) -> np.ndarray:
        return self.matrices.astype(np.float64)

    def prefix(self, m: int) -> "GeneratorSet":
        if m > self.m:
            raise AdmissibilityError(self.n, m, self.m + 1)
        return GeneratorSet(n=self.n, m=m, matrices=self.matrices[:m].copy())


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    passed: bool
    max_violation: float


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[InvariantCheck, ...]
    tolerance: float = VALIDATION_TOLERANCE

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_names(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    @property
    def max_violation(self) -> float:
        return max((check.max_violation for check in self.checks), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "checks": {
                check.name: {"passed": check.passed, "max_violation": check.max_violation}
                for check in self.checks
            },
        }


def hurwitz_radon(n: int) -> int:
    """Return rho(n) = 8r + 2**s where n = k * 2**(4r + s), k odd, 0 <= s <= 3."""
    if n < 1:
        raise ValueError(f"Hurwitz-Radon number is defined for positive integers, got {n}")
    exponent = 0
    while n % 2 == 0:
        n //= 2
        exponent += 1
    r, s = divmod(exponent, 4)
    return 8 * r + 2**s


def _word_matrix(word: str) -> np.ndarray:
    return reduce(np.kron, (_PAULI[letter] for letter in word))


@lru_cache(maxsize=None)
def _sixteen_dimensional() -> Tuple[Tuple[np.ndarray, ...], np.ndarray]:
    """Eight generators on R^16 and their product, the volume element."""
    words = ["X" + word for word in _BASE_WORDS[3]] + ["EIII"]
    factors = tuple(_word_matrix(word) for word in words)
    # omega is symmetric, squares to I and anti-commutes with every factor
    omega = reduce(np.matmul, factors)
    return factors, omega


@lru_cache(maxsize=None)
def _maximal_generators(n: int) -> Tuple[np.ndarray, ...]:
    odd, exponent = n, 0
    while odd % 2 == 0:
        odd //= 2
        exponent += 1
    periods, s = divmod(exponent, 4)
    generators = [_word_matrix(word) for word in _BASE_WORDS[s]]
    dim = 2**s
    factors, omega = _sixteen_dimensional()
    for _ in range(periods):
        eye = np.eye(dim, dtype=np.int64)
        generators = [np.kron(f, eye) for f in factors] + [np.kron(omega, g) for g in generators]
        dim *= 16
    if odd > 1:
        eye = np.eye(odd, dtype=np.int64)
        generators = [np.kron(g, eye) for g in generators]
    return tuple(g.astype(np.int8) for g in generators)


def build_generators(n: int, m: int) -> GeneratorSet:
    """Deterministic generator set; build_generators(n, k) is a prefix of build_generators(n, m) for k < m."""
    if n < 2 or n % 2:
        raise DimensionMismatchError(f"Horizontal dimension must be a positive even integer, got n={n}")
    if m < 0:
        raise ValueError(f"Number of generators must be non-negative, got m={m}")
    rho = hurwitz_radon(n)
    if m >= rho:
        raise AdmissibilityError(n, m, rho)
    full = _maximal_generators(n)
    matrices = np.stack(full[:m]) if m else np.zeros((0, n, n), dtype=np.int8)
    LOGGER.debug("Built %d generators on R^%d (rho=%d)", m, n, rho)
    return GeneratorSet(n=n, m=m, matrices=matrices)


def octonion_generators() -> GeneratorSet:
    """The seven 8x8 generators j_1..j_7 of the octonion H-type group."""
    table = np.array(_OCTONION_TABLE, dtype=np.int64)
    matrices = np.stack(
        [(np.sign(table) * (np.abs(table) == alpha)).astype(np.int8) for alpha in range(1, 8)]
    )
    return GeneratorSet(n=8, m=7, matrices=matrices)


def quaternion_generators(k: int = 1) -> GeneratorSet:
    """Quaternion-type generators on R^(4k): the quaternion triple tensored with I_k."""
    if k < 1:
        raise ValueError(f"Quaternion multiplicity must be positive, got k={k}")
    eye = np.eye(k, dtype=np.int64)
    matrices = np.stack([np.kron(_word_matrix(word), eye) for word in _BASE_WORDS[2]]).astype(np.int8)
    return GeneratorSet(n=4 * k, m=3, matrices=matrices)


def _signed_permutation_violation(matrix: np.ndarray) -> float:
    rounded = np.rint(matrix)
    violation = float(np.max(np.abs(matrix - rounded), initial=0.0))
    magnitudes = np.abs(rounded)
    if np.any(magnitudes > 1):
        return max(violation, float(magnitudes.max() - 1))
    if np.any(magnitudes.sum(axis=0) != 1) or np.any(magnitudes.sum(axis=1) != 1):
        return max(violation, 1.0)
    return violation


def validate_generators(g: GeneratorSet, tolerance: float = VALIDATION_TOLERANCE) -> ValidationReport:
    """Check skew-symmetry, J^2 = -I, anti-commutation, signed permutation shape and admissibility."""
    mats = g.as_float()
    eye = np.eye(g.n)
    skew = max((float(np.max(np.abs(J + J.T))) for J in mats), default=0.0)
    square = max((float(np.max(np.abs(J @ J + eye))) for J in mats), default=0.0)
    anticommute = max(
        (float(np.max(np.abs(mats[a] @ mats[b] + mats[b] @ mats[a]))) for a, b in itertools.combinations(range(g.m), 2)),
        default=0.0,
    )
    permutation = max((_signed_permutation_violation(J) for J in mats), default=0.0)
    rho = hurwitz_radon(g.n)
    admissible = float(max(0, g.m - rho + 1))

    checks = (
        InvariantCheck("skew", skew <= tolerance, skew),
        InvariantCheck("square", square <= tolerance, square),
        InvariantCheck("anticommute", anticommute <= tolerance, anticommute),
        InvariantCheck("signed_permutation", permutation <= tolerance, permutation),
        InvariantCheck("admissible", admissible == 0.0, admissible),
    )
    report = ValidationReport(checks=checks, tolerance=tolerance)
    if not report.passed:
        LOGGER.debug("Generator validation failed: %s", ", ".join(report.failed_names))
    return report


def generators_to_dict(g: GeneratorSet) -> Dict[str, Any]:
    matrices = np.rint(g.matrices).astype(int) if not g.is_integral else g.matrices.astype(int)
    return {"n": g.n, "m": g.m, "matrices": matrices.tolist()}


def generators_from_matrices(matrices: Sequence[Any]) -> GeneratorSet:
    array = np.asarray(matrices, dtype=np.float64)
    if array.ndim != 3 or array.shape[1] != array.shape[2]:
        raise DimensionMismatchError(f"Generators must be a list of square matrices, got shape {array.shape}")
    return GeneratorSet(n=array.shape[1], m=array.shape[0], matrices=array)


def generators_from_dict(doc: Dict[str, Any]) -> GeneratorSet:
    try:
        matrices = doc["matrices"]
    except KeyError as exc:
        raise ValueError("Generator document must include 'matrices'") from exc
    g = generators_from_matrices(matrices) if len(matrices) else None
    n = int(doc.get("n", g.n if g else 0))
    m = int(doc.get("m", g.m if g else 0))
    if g is None:
        return GeneratorSet(n=n, m=0, matrices=np.zeros((0, n, n)))
    if (g.n, g.m) != (n, m):
        raise DimensionMismatchError(f"Declared (n, m) = ({n}, {m}) but matrices give ({g.n}, {g.m})")
    return g
