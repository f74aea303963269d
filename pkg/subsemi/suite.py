"""Property suite run by `subsemi-cli verify`.

Every check samples with numpy.random.default_rng(seed) so a given seed
reproduces the report bit for bit.
"""
from __future__ import annotations

import functools
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Tuple

import numpy as np

from .algebra import (
    GroupElement,
    HTypeAlgebra,
    Signature,
    a_of_u,
    bracket,
    bracket_generating_singular_values,
    check_j2_condition,
    group_inverse,
    group_multiply,
    identity,
    inner_v,
    j_of_u,
    make_algebra,
)
from .clifford import (
    GeneratorSet,
    build_generators,
    hurwitz_radon,
    octonion_generators,
    validate_generators,
)
from .geodesic import drift_summary, projection_residuals, sample, solve_geodesic, translate_trajectory
from .oracle import IntegratorConfig, convergence_ratio, geodesic_residual, integrate_geodesic
from .spectral import (
    char_poly,
    char_poly_oracle,
    classify_spectrum,
    eta_commutation,
    eta_j_alpha_spectrum,
    octonion_char_poly,
    relative_coefficient_error,
)

LOGGER = logging.getLogger("subsemi.suite")


@dataclass(frozen=True)
class SuiteSettings:
    oracle_cases: int = 50
    oracle_steps: int = 4000
    oracle_samples: int = 21
    translation_cases: int = 3


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_violation: float
    tolerance: float
    cases: int
    details: Dict[str, Any] = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "passed": self.passed,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "cases": self.cases,
        }
        if self.details:
            payload["details"] = dict(self.details)
        return payload


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    checks: Tuple[CheckResult, ...]
    elapsed: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed_names(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": {check.name: check.to_dict() for check in self.checks},
        }


def fixtures() -> Dict[str, GeneratorSet]:
    return {
        "heisenberg": build_generators(2, 1),
        "quaternion": build_generators(4, 3),
        "octonion": octonion_generators(),
        "clifford_8_7": build_generators(8, 7),
    }


@functools.lru_cache(maxsize=None)
def _algebras() -> Tuple[Tuple[str, HTypeAlgebra], ...]:
    result = []
    for name, gens in fixtures().items():
        for p in range(gens.n // 2 + 1):
            result.append((f"{name}/p={p}", make_algebra(gens, Signature.for_dimension(gens.n, p))))
    return tuple(result)


def _result(name: str, violation: float, tolerance: float, cases: int, **details: Any) -> CheckResult:
    return CheckResult(
        name=name,
        passed=bool(violation <= tolerance),
        max_violation=float(violation),
        tolerance=tolerance,
        cases=cases,
        details=details,
    )


def _unit(rng: np.random.Generator, size: int) -> np.ndarray:
    x = rng.standard_normal(size)
    return x / np.linalg.norm(x)


def check_octonion_polynomials(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    gens = octonion_generators()
    worst, cases = 0.0, 0
    for p in range(1, 5):
        alg = make_algebra(gens, Signature.for_dimension(8, p))
        for _ in range(20):
            u = rng.standard_normal(7)
            error = relative_coefficient_error(char_poly(a_of_u(alg, u)), octonion_char_poly(p, u), np.linalg.norm(u))
            worst, cases = max(worst, error), cases + 1
    return _result("octonion_char_poly", worst, 1e-9, cases)


def check_parity(rng: np.random.Generator, _settings: SuiteSettings) -> List[CheckResult]:
    mismatches, det_error, cases = 0, 0.0, 0
    for _name, alg in _algebras():
        for _ in range(50):
            u = rng.standard_normal(alg.m)
            data = classify_spectrum(alg, u)
            mismatches += int(data.s != alg.sig.p % 2)
            expected = (-1) ** alg.sig.p * data.u_norm**alg.n
            det_error = max(det_error, abs(np.linalg.det(a_of_u(alg, u)) - expected) / abs(expected))
            cases += 1
    return [_result("parity", float(mismatches), 0.0, cases), _result("determinant", det_error, 1e-8, cases)]


def check_spectral_residuals(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    for _name, alg in _algebras():
        for _ in range(10):
            u = rng.standard_normal(alg.m)
            data = classify_spectrum(alg, u)
            A = a_of_u(alg, u)
            if not data.passed:
                worst = max(worst, 1.0)
            eigenvalues, vectors = np.linalg.eig(A)
            for k in range(alg.n):
                # (-lambda, eta x) is an eigenpair of A^T
                x = alg.eta @ vectors[:, k]
                worst = max(worst, float(np.linalg.norm(A.T @ x + eigenvalues[k] * x)) / data.u_norm)
            cases += 1
    return _result("spectral_residuals", worst, 1e-9, cases)


def check_odd_minors(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    for _name, alg in _algebras():
        for _ in range(5):
            u = rng.standard_normal(alg.m)
            norm = float(np.linalg.norm(u))
            A = a_of_u(alg, u)
            coefficients = char_poly(A)
            odd = np.abs(coefficients[1::2]).max() / max(1.0, norm**alg.n)
            agreement = relative_coefficient_error(coefficients, char_poly_oracle(A), norm)
            worst, cases = max(worst, odd, agreement), cases + 1
    return _result("odd_minors", worst, 1e-8, cases)


def check_generators(_rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    for n in range(2, 17, 2):
        for m in range(hurwitz_radon(n)):
            report = validate_generators(build_generators(n, m))
            worst = max(worst, report.max_violation if report.passed else 1.0)
            cases += 1
    return _result("generators", worst, 0.0, cases)


def expected_real_pairs(gens: GeneratorSet, p: int, alpha: int) -> int:
    """Index pairs of j_alpha joining a timelike and a spacelike direction."""
    rows, cols = np.nonzero(gens.matrices[alpha - 1])
    return int(np.sum((rows < cols) & ((rows < p) != (cols < p))))


def check_eta_j_spectra(_rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    gens = octonion_generators()
    worst, cases = 0.0, 0
    for p in range(5):
        alg = make_algebra(gens, Signature.for_dimension(8, p))
        classes = [eta_commutation(alg, alpha) for alpha in range(1, 8)]
        for alpha in range(1, 8):
            eigenvalues = eta_j_alpha_spectrum(alg, alpha)
            nearest = np.array([min((1, -1, 1j, -1j), key=lambda z: abs(z - lam)) for lam in eigenvalues])
            worst = max(worst, float(np.max(np.abs(eigenvalues - nearest))))
            real_pairs = int(np.sum(np.isclose(nearest, 1.0)))
            if real_pairs != expected_real_pairs(gens, p, alpha) or (p % 2 and real_pairs == 0):
                worst = max(worst, 1.0)
            X = alg.eta_j[alpha - 1]
            square = {1: -np.eye(8), -1: np.eye(8)}.get(classes[alpha - 1])
            if square is not None:
                worst = max(worst, float(np.max(np.abs(X @ X - square))))
            for beta in range(alpha + 1, 8):
                if classes[alpha - 1] == 0 or classes[alpha - 1] != classes[beta - 1]:
                    continue
                Y = alg.eta_j[beta - 1]
                worst = max(worst, float(np.max(np.abs(X @ Y + Y @ X))))
            cases += 1
    return _result("eta_j_spectra", worst, 1e-10, cases)


def check_algebra_axioms(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    for _name, alg in _algebras():
        for _ in range(10):
            a, b, c = (GroupElement(rng.standard_normal(alg.n), rng.standard_normal(alg.m)) for _ in range(3))
            left = group_multiply(alg, group_multiply(alg, a, b), c)
            right = group_multiply(alg, a, group_multiply(alg, b, c))
            inverse = group_multiply(alg, a, group_inverse(alg, a))
            unit = group_multiply(alg, a, identity(alg))
            worst = max(
                worst,
                float(np.max(np.abs(left.as_array() - right.as_array()))),
                float(np.max(np.abs(inverse.as_array()))),
                float(np.max(np.abs(unit.as_array() - a.as_array()))),
            )
            u, v, w = rng.standard_normal(alg.m), rng.standard_normal(alg.n), rng.standard_normal(alg.n)
            duality = abs(float(u @ bracket(alg, v, w)) - inner_v(alg.sig, a_of_u(alg, u) @ v, w))
            square = np.max(np.abs(j_of_u(alg, u) @ j_of_u(alg, u) + (u @ u) * np.eye(alg.n)))
            worst = max(worst, duality, float(square) / max(1.0, float(u @ u)))
            cases += 1
    return _result("algebra_axioms", worst, 1e-10, cases)


def check_bracket_generating(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    smallest, cases = np.inf, 0
    for _name, alg in _algebras():
        for _ in range(10):
            at = GroupElement(rng.standard_normal(alg.n), rng.standard_normal(alg.m))
            values = bracket_generating_singular_values(alg, at)
            smallest = min(smallest, float(values[alg.n + alg.m - 1]) if len(values) >= alg.n + alg.m else 0.0)
            cases += 1
    # shortfall of the (n+m)-th singular value below the rank threshold
    return _result("bracket_generating", max(0.0, 1e-8 - smallest), 0.0, cases)


def check_j2(_rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    for _name, alg in _algebras():
        report = check_j2_condition(alg)
        worst, cases = max(worst, report.max_residual), cases + 1
    return _result("j2_condition", worst, 1e-8, cases)


def _random_case(rng: np.random.Generator) -> Tuple[HTypeAlgebra, np.ndarray, np.ndarray]:
    gens = [build_generators(2, 1), build_generators(4, 3), octonion_generators()][int(rng.integers(3))]
    p = int(rng.integers(gens.n // 2 + 1))
    alg = make_algebra(gens, Signature.for_dimension(gens.n, p))
    return alg, _unit(rng, alg.n) * rng.uniform(0.5, 1.5), _unit(rng, alg.m) * rng.uniform(0.5, 1.5)


def check_oracle_agreement(rng: np.random.Generator, settings: SuiteSettings) -> List[CheckResult]:
    deviation, closed_drift, oracle_drift, closed_speed = 0.0, 0.0, 0.0, 0.0
    record_every = max(1, settings.oracle_steps // (settings.oracle_samples - 1))
    cfg = IntegratorConfig(steps=record_every * (settings.oracle_samples - 1), t_end=1.0, record_every=record_every)
    for _ in range(settings.oracle_cases):
        alg, v0dot, u0dot = _random_case(rng)
        closed = sample(solve_geodesic(alg, v0dot, u0dot), 0.0, 1.0, settings.oracle_samples)
        oracle = integrate_geodesic(alg, v0dot, u0dot, cfg)
        deviation = max(deviation, float(np.max(np.abs(closed.positions - oracle.positions))))
        closed_summary = drift_summary(alg, closed, u0dot)
        oracle_summary = drift_summary(alg, oracle, u0dot)
        closed_drift = max(closed_drift, closed_summary["momentum_drift"])
        closed_speed = max(closed_speed, closed_summary["speed_drift"])
        oracle_drift = max(oracle_drift, oracle_summary["momentum_drift"], oracle_summary["speed_drift"])
    cases = settings.oracle_cases
    return [
        _result(
            "closed_form_vs_oracle",
            deviation,
            1e-6,
            cases,
            rk4_steps=cfg.steps,
            rk4_step_size=cfg.h,
            compared_samples=settings.oracle_samples,
        ),
        _result("momentum_drift_closed_form", closed_drift, 1e-8, cases),
        _result("speed_drift_closed_form", closed_speed, 1e-9, cases),
        _result("drift_oracle", oracle_drift, 1e-8, cases),
    ]


def check_projections(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    worst, cases = 0.0, 0
    setups = [
        (build_generators(2, 1), 1),
        (build_generators(2, 1), 0),
        (octonion_generators(), 1),
        (octonion_generators(), 2),
        (octonion_generators(), 4),
        (build_generators(4, 3), 2),
    ]
    for gens, p in setups:
        alg = make_algebra(gens, Signature.for_dimension(gens.n, p))
        sol = solve_geodesic(alg, rng.standard_normal(alg.n), rng.standard_normal(alg.m))
        for t in np.linspace(0.05, 1.0, 20):
            for residual in projection_residuals(sol, float(t)):
                worst, cases = max(worst, residual.residual), cases + 1
    return _result("projection_curves", worst, 1e-9, cases)


def check_left_translation(rng: np.random.Generator, settings: SuiteSettings) -> CheckResult:
    worst = 0.0
    for _ in range(settings.translation_cases):
        alg, v0dot, u0dot = _random_case(rng)
        traj = sample(solve_geodesic(alg, v0dot, u0dot), 0.0, 1.0, 1001)
        g = GroupElement(rng.standard_normal(alg.n), rng.standard_normal(alg.m))
        worst = max(worst, geodesic_residual(alg, translate_trajectory(alg, g, traj)))
    return _result("left_translation", worst, 1e-5, settings.translation_cases)


def check_convergence(rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    alg = make_algebra(build_generators(2, 1), Signature(1, 1))
    ratio = convergence_ratio(alg, np.array([1.0, 0.0]), np.array([1.0]), steps=40)
    alg = make_algebra(octonion_generators(), Signature.for_dimension(8, 2))
    ratio_octonion = convergence_ratio(alg, _unit(rng, 8), _unit(rng, 7), steps=40)
    # distance outside the accepted band [12, 20]
    violation = max(max(0.0, 12.0 - r, r - 20.0) for r in (ratio, ratio_octonion))
    return _result("rk4_convergence", violation, 0.0, 2)


def check_injected_fault(_rng: np.random.Generator, _settings: SuiteSettings) -> CheckResult:
    matrices = octonion_generators().matrices.astype(np.float64)
    matrices[0, 0, 1] = 0.0
    report = validate_generators(GeneratorSet(n=8, m=7, matrices=matrices))
    return _result("injected_fault", report.max_violation, 1e-12, 1)


CHECKS: Tuple[Callable[[np.random.Generator, SuiteSettings], Any], ...] = (
    check_generators,
    check_algebra_axioms,
    check_j2,
    check_bracket_generating,
    check_octonion_polynomials,
    check_odd_minors,
    check_parity,
    check_spectral_residuals,
    check_eta_j_spectra,
    check_projections,
    check_oracle_agreement,
    check_left_translation,
    check_convergence,
)


def run_suite(seed: int = 0, settings: SuiteSettings | None = None, inject_fault: bool = False) -> SuiteReport:
    settings = settings or SuiteSettings()
    checks = list(CHECKS) + ([check_injected_fault] if inject_fault else [])
    started = time.monotonic()
    results: List[CheckResult] = []
    for index, check in enumerate(checks):
        rng = np.random.default_rng([seed, index])
        outcome = check(rng, settings)
        for result in outcome if isinstance(outcome, list) else [outcome]:
            LOGGER.debug("%s: %s (max violation %.3e)", result.name, "pass" if result.passed else "FAIL", result.max_violation)
            results.append(result)
    return SuiteReport(seed=seed, checks=tuple(results), elapsed=time.monotonic() - started)
