from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from typing import Any, Dict, List

from .config import load_config, parse_config, parse_vector_flag
from .errors import ConfigError, InvalidGeneratorsError, SpectralError, SubsemiError
from .output import dumps_json
from .service import ExperimentService
from .suite import SuiteSettings

LOGGER = logging.getLogger("subsemi.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_GENERATORS = 3


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Path to the run configuration JSON. Defaults to builtin:octonion with p=0.")
    parser.add_argument("--seed", type=int, help="Seed for every random draw (default: 0)")
    parser.add_argument("--out", help="Output directory for CSV/SVG files (default: out)")
    parser.add_argument("--generators", help="Generator source, e.g. builtin:heisenberg")
    parser.add_argument("--p", type=int, help="Number of timelike directions in V")
    parser.add_argument("--u", help="Center vector for 'spectrum', comma separated")
    parser.add_argument("--v0dot", help="Initial horizontal velocity, comma separated")
    parser.add_argument("--u0dot", help="Initial vertical velocity, comma separated")
    parser.add_argument("--t0", type=float, help="Start of the sampled time range")
    parser.add_argument("--t1", type=float, help="End of the sampled time range")
    parser.add_argument("--samples", type=int, help="Number of sample times, endpoints included")
    parser.add_argument("--oracle-steps", type=int, dest="oracle_steps", help="RK4 steps for the oracle comparison")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log debug messages to stderr")


def parse_args(argv: List[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description="Geodesics of H-type groups with an indefinite horizontal metric."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    _add_common(commands.add_parser("algebra", help="Describe and validate the configured algebra"))
    _add_common(commands.add_parser("spectrum", help="Classify the spectrum of the geodesic operator at u"))
    geodesic = commands.add_parser("geodesic", help="Sample the closed-form geodesic and write trajectory.csv")
    _add_common(geodesic)
    geodesic.add_argument(
        "--oracle-check",
        action="store_true",
        help="Also integrate the geodesic equations with RK4 and report the maximal deviation",
    )
    _add_common(commands.add_parser("plot", help="Write one SVG per 2D block projection"))
    verify = commands.add_parser("verify", help="Run the property suite over the builtin fixtures")
    _add_common(verify)
    verify.add_argument("--inject-fault", action="store_true", help="Add a deliberately broken generator check")
    verify.add_argument("--cases", type=int, help="Number of random closed-form vs. oracle cases (default: 50)")
    return parser.parse_args(argv)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "seed": args.seed,
        "out": args.out,
        "generators": args.generators,
        "p": args.p,
        "t0": args.t0,
        "t1": args.t1,
        "samples": args.samples,
        "oracle_steps": args.oracle_steps,
    }
    for key in ("u", "v0dot", "u0dot"):
        text = getattr(args, key)
        overrides[key] = parse_vector_flag(text) if text is not None else None
    return {key: value for key, value in overrides.items() if value is not None}


def build_service(args: argparse.Namespace) -> ExperimentService:
    overrides = _overrides(args)
    config = load_config(args.config, overrides) if args.config else parse_config(overrides)
    return ExperimentService(config)


def run_command(service: ExperimentService, args: argparse.Namespace) -> int:
    if args.command == "algebra":
        payload = service.describe_algebra()
        sys.stdout.write(dumps_json(payload) + "\n")
        return EXIT_OK if payload["passed"] else EXIT_GENERATORS

    if args.command == "spectrum":
        payload = service.spectrum()
        sys.stdout.write(dumps_json(payload) + "\n")
        return EXIT_OK if payload["passed"] else EXIT_FAILED

    if args.command == "geodesic":
        summary = service.geodesic(oracle_check=args.oracle_check)
        sys.stdout.write(dumps_json(summary) + "\n")
        return EXIT_OK if summary["passed"] else EXIT_FAILED

    if args.command == "plot":
        paths = service.plot()
        sys.stdout.write(dumps_json({"plots": [str(path) for path in paths]}) + "\n")
        return EXIT_OK

    settings = SuiteSettings()
    if args.cases is not None:
        if args.cases < 1:
            raise ConfigError(f"--cases must be positive, got {args.cases}")
        settings = replace(settings, oracle_cases=args.cases)
    report = service.verify(settings=settings, inject_fault=args.inject_fault)
    sys.stdout.write(dumps_json(report.to_dict()) + "\n")
    if not report.passed:
        sys.stderr.write("Failed checks: " + ", ".join(report.failed_names) + "\n")
    LOGGER.info("Suite finished in %.1fs", report.elapsed)
    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv: List[str] | None = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        service = build_service(args)
        return run_command(service, args)
    except InvalidGeneratorsError as exc:
        sys.stderr.write(f"Invalid generators: {exc}\n")
        return EXIT_GENERATORS
    except SpectralError as exc:
        sys.stderr.write(f"Spectral classification failed: {exc}\n")
        return EXIT_FAILED
    except SubsemiError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"Cannot write output: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
