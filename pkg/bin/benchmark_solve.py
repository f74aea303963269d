#!/usr/bin/env python3
from __future__ import annotations

import argparse
import statistics
import sys
import time
from typing import List, Sequence, Tuple

import numpy as np

from subsemi.algebra import Signature, make_algebra
from subsemi.clifford import build_generators, hurwitz_radon, octonion_generators
from subsemi.errors import SubsemiError
from subsemi.geodesic import sample, solve_geodesic
from subsemi.oracle import IntegratorConfig, integrate_geodesic


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Benchmark closed-form geodesics against the RK4 integrator."
    )
    parser.add_argument(
        "--n",
        type=int,
        default=8,
        help="Horizontal dimension (8 uses the octonion generators).",
    )
    parser.add_argument(
        "--m",
        type=int,
        help="Vertical dimension for constructed generators (default rho(n) - 1).",
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=101,
        help="Points sampled along each closed-form geodesic.",
    )
    parser.add_argument(
        "--oracle-steps",
        type=int,
        default=10_000,
        help="RK4 steps on [0, 1]; 0 skips the integrator.",
    )
    parser.add_argument(
        "--iterations",
        type=int,
        default=5,
        help="Number of benchmark iterations to measure.",
    )
    parser.add_argument(
        "--warmup",
        type=int,
        default=1,
        help="Warmup iterations (not included in stats).",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=1337,
        help="Random seed for initial velocities.",
    )
    return parser.parse_args(argv)


def pct(values: List[float], p: float) -> float:
    if not values:
        return 0.0
    sorted_vals = sorted(values)
    idx = int(round((len(sorted_vals) - 1) * p))
    return sorted_vals[max(0, min(idx, len(sorted_vals) - 1))]


def benchmark_index(
    n: int,
    m: int,
    p: int,
    *,
    samples: int,
    oracle_steps: int,
    iterations: int,
    warmup: int,
    seed: int,
) -> Tuple[List[float], List[float], float]:
    gens = octonion_generators() if (n, m) == (8, 7) else build_generators(n, m)
    alg = make_algebra(gens, Signature.for_dimension(n, p))
    rng = np.random.default_rng(seed + p)
    closed_times: List[float] = []
    oracle_times: List[float] = []
    deviation = 0.0

    for idx in range(iterations + warmup):
        v0dot, u0dot = rng.standard_normal(n), rng.standard_normal(m)
        start = time.perf_counter()
        traj = sample(solve_geodesic(alg, v0dot, u0dot), 0.0, 1.0, samples)
        closed = time.perf_counter() - start
        if idx >= warmup:
            closed_times.append(closed)
        if oracle_steps <= 0:
            continue
        start = time.perf_counter()
        oracle = integrate_geodesic(alg, v0dot, u0dot, IntegratorConfig(steps=oracle_steps))
        elapsed = time.perf_counter() - start
        if idx >= warmup:
            oracle_times.append(elapsed)
            end_gap = np.max(np.abs(oracle.positions[-1] - traj.positions[-1]))
            deviation = max(deviation, float(end_gap))

    return closed_times, oracle_times, deviation


def summary_line(label: str, values: List[float]) -> str:
    return (
        f"{label}: mean={statistics.mean(values):.4f} median={statistics.median(values):.4f} "
        f"p95={pct(values, 0.95):.4f} min={min(values):.4f} max={max(values):.4f}"
    )


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    if args.iterations <= 0:
        sys.stderr.write("--iterations must be positive.\n")
        return 2
    try:
        m = args.m if args.m is not None else hurwitz_radon(args.n) - 1
        print(f"Algebra n={args.n} m={m} samples={args.samples} oracle_steps={args.oracle_steps}")
        for p in range(args.n // 2 + 1):
            closed, oracle, deviation = benchmark_index(
                args.n,
                m,
                p,
                samples=args.samples,
                oracle_steps=args.oracle_steps,
                iterations=args.iterations,
                warmup=args.warmup,
                seed=args.seed,
            )
            print(f"p={p}")
            print("  " + summary_line("closed form (seconds)", closed))
            if oracle:
                print("  " + summary_line("rk4 (seconds)", oracle))
                print(f"  max endpoint deviation: {deviation:.3e}")
    except SubsemiError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
