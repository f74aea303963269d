from __future__ import annotations

import logging
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from .algebra import HTypeAlgebra, Signature, check_j2_condition, make_algebra
from .clifford import (
    GeneratorSet,
    build_generators,
    generators_from_matrices,
    generators_to_dict,
    hurwitz_radon,
    octonion_generators,
    quaternion_generators,
    validate_generators,
)
from .config import AlgebraSpec, RunConfig, config_to_dict
from .geodesic import GeodesicSolution, drift_summary, sample, solve_geodesic
from .oracle import IntegratorConfig, integrate_geodesic
from .output import write_json, write_trajectory_csv
from .plots import plot_projections
from .spectral import spectrum_report
from .suite import SuiteReport, SuiteSettings, run_suite

LOGGER = logging.getLogger("subsemi.service")

MOMENTUM_TOLERANCE = 1e-8
SPEED_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-6


def build_generator_set(spec: AlgebraSpec) -> GeneratorSet:
    if spec.source == "octonion":
        return octonion_generators()
    if spec.source == "quaternion":
        return quaternion_generators(spec.n // 4)
    if spec.source in {"heisenberg", "clifford"}:
        return build_generators(spec.n, spec.m)
    return generators_from_matrices(spec.matrices)


class ExperimentService:
    """Runs the CLI commands against one loaded configuration and returns JSON-ready payloads."""

    def __init__(self, config: RunConfig):
        self.config = config

    @cached_property
    def generators(self) -> GeneratorSet:
        return build_generator_set(self.config.algebra)

    @cached_property
    def algebra(self) -> HTypeAlgebra:
        spec = self.config.algebra
        return make_algebra(self.generators, Signature(p=spec.p, q=spec.q), seed=self.config.seed)

    @property
    def out_dir(self) -> Path:
        return self.config.out_dir

    def describe_algebra(self) -> Dict[str, Any]:
        """Dimensions, admissibility and the generator validation report; never raises on invalid generators."""
        spec = self.config.algebra
        gens = self.generators
        report = validate_generators(gens)
        rho = hurwitz_radon(gens.n)
        payload: Dict[str, Any] = {
            "n": gens.n,
            "m": gens.m,
            "p": spec.p,
            "q": spec.q,
            "rho": rho,
            "admissible": gens.m < rho,
            "generators": f"builtin:{spec.source}" if spec.is_builtin else "inline",
            "validation": report.to_dict(),
            "passed": report.passed,
        }
        if report.passed:
            payload["j2_condition"] = check_j2_condition(self.algebra, seed=self.config.seed).to_dict()
        return payload

    def spectrum(self) -> Dict[str, Any]:
        return spectrum_report(self.algebra, np.array(self.config.require("u")))

    def solution(self) -> GeodesicSolution:
        cfg = self.config
        return solve_geodesic(self.algebra, np.array(cfg.require("v0dot")), np.array(cfg.require("u0dot")))

    def geodesic(self, oracle_check: bool = False, oracle_steps: Optional[int] = None) -> Dict[str, Any]:
        cfg = self.config
        sol = self.solution()
        traj = sample(sol, cfg.t0, cfg.t1, cfg.samples)
        csv_path = write_trajectory_csv(traj, self.out_dir / "trajectory.csv")
        self.write_generators()
        self.write_config()

        drifts = drift_summary(self.algebra, traj, sol.u0dot)
        summary: Dict[str, Any] = {
            "causal": traj.causal.value,
            "samples": len(traj),
            "csv": str(csv_path),
            "straight_line": sol.is_straight,
            **drifts,
            "tolerances": {"momentum_drift": MOMENTUM_TOLERANCE, "speed_drift": SPEED_TOLERANCE},
        }
        passed = drifts["momentum_drift"] <= MOMENTUM_TOLERANCE and drifts["speed_drift"] <= SPEED_TOLERANCE

        if oracle_check:
            summary["oracle_deviation"] = self._oracle_deviation(sol, oracle_steps or cfg.oracle_steps)
            summary["tolerances"]["oracle_deviation"] = ORACLE_TOLERANCE
            passed = passed and summary["oracle_deviation"] <= ORACLE_TOLERANCE
        summary["passed"] = passed
        return summary

    def _oracle_deviation(self, sol: GeodesicSolution, steps: int) -> float:
        """Max |closed form - RK4| over the oracle grid on [0, t1]."""
        cfg = self.config
        t_end = cfg.t1 if cfg.t1 > 0 else 1.0
        intervals = 20
        record_every = max(1, steps // intervals)
        integrator = IntegratorConfig(steps=record_every * intervals, t_end=t_end, record_every=record_every)
        oracle = integrate_geodesic(self.algebra, sol.v0dot, sol.u0dot, integrator)
        closed = sample(sol, 0.0, t_end, intervals + 1)
        deviation = float(np.max(np.abs(closed.positions - oracle.positions)))
        LOGGER.info("Oracle deviation %.3e with %d RK4 steps", deviation, integrator.steps)
        return deviation

    def plot(self) -> List[Path]:
        cfg = self.config
        return plot_projections(self.solution(), cfg.t0, cfg.t1, cfg.samples, self.out_dir)

    def verify(self, settings: Optional[SuiteSettings] = None, inject_fault: bool = False) -> SuiteReport:
        return run_suite(seed=self.config.seed, settings=settings, inject_fault=inject_fault)

    def write_generators(self) -> Path:
        return write_json(generators_to_dict(self.generators), self.out_dir / "generators.json")

    def write_config(self) -> Path:
        return write_json(config_to_dict(self.config), self.out_dir / "config.json")
