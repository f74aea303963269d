from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from .errors import ConfigError

BUILTIN_PREFIX = "builtin:"
BUILTINS = {
    "octonion": (8, 7),
    "heisenberg": (2, 1),
    "quaternion": (4, 3),
    "clifford": None,
}
KNOWN_KEYS = {
    "n",
    "m",
    "p",
    "generators",
    "u",
    "v0dot",
    "u0dot",
    "t0",
    "t1",
    "samples",
    "seed",
    "out",
    "oracle_steps",
}


@dataclass(frozen=True)
class AlgebraSpec:
    """Which generators to use and the metric index p on R^n."""

    n: int
    m: int
    p: int
    source: str
    matrices: Optional[Tuple[Tuple[Tuple[float, ...], ...], ...]] = None

    @property
    def q(self) -> int:
        return self.n - self.p

    @property
    def is_builtin(self) -> bool:
        return self.source != "inline"


@dataclass(frozen=True)
class RunConfig:
    """A complete run description: the algebra plus command parameters."""

    algebra: AlgebraSpec
    u: Optional[Tuple[float, ...]] = None
    v0dot: Optional[Tuple[float, ...]] = None
    u0dot: Optional[Tuple[float, ...]] = None
    t0: float = 0.0
    t1: float = 1.0
    samples: int = 101
    seed: int = 0
    out: str = "out"
    oracle_steps: int = 100_000

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def require(self, key: str) -> Tuple[float, ...]:
        value = getattr(self, key)
        if value is None:
            raise ConfigError(f"Configuration key '{key}' is required for this command")
        return value


def _int(raw: Dict[str, Any], key: str, default: Optional[int] = None) -> Optional[int]:
    value = raw.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"Configuration key '{key}' must be an integer, got {value!r}")
    return value


def _float(raw: Dict[str, Any], key: str, default: float) -> float:
    value = raw.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"Configuration key '{key}' must be a number, got {value!r}")
    return float(value)


def _vector(raw: Dict[str, Any], key: str, size: int) -> Optional[Tuple[float, ...]]:
    value = raw.get(key)
    if value is None:
        return None
    if not isinstance(value, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        raise ConfigError(f"Configuration key '{key}' must be a list of numbers")
    if len(value) != size:
        raise ConfigError(f"Configuration key '{key}' must have {size} entries, got {len(value)}")
    return tuple(float(x) for x in value)


def _inline_matrices(value: Any) -> Tuple[Tuple[Tuple[float, ...], ...], ...]:
    if isinstance(value, dict):
        value = value.get("matrices")
    if not isinstance(value, list) or not value:
        raise ConfigError("Inline 'generators' must be a non-empty list of square matrices")
    size = None
    matrices = []
    for index, matrix in enumerate(value):
        if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
            raise ConfigError(f"Generator {index + 1} must be a list of rows")
        size = size or len(matrix)
        if len(matrix) != size or any(len(row) != size for row in matrix):
            raise ConfigError(f"Generator {index + 1} must be a {size}x{size} matrix")
        try:
            matrices.append(tuple(tuple(float(x) for x in row) for row in matrix))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Generator {index + 1} contains a non-numeric entry") from exc
    return tuple(matrices)


def parse_algebra(raw: Dict[str, Any]) -> AlgebraSpec:
    generators = raw.get("generators", "builtin:octonion")
    n = _int(raw, "n")
    m = _int(raw, "m")
    matrices = None
    if isinstance(generators, str):
        if not generators.startswith(BUILTIN_PREFIX):
            raise ConfigError(f"Unknown generator source '{generators}', expected 'builtin:<name>' or inline matrices")
        name = generators[len(BUILTIN_PREFIX) :]
        if name not in BUILTINS:
            raise ConfigError(
                f"Unknown builtin generators '{name}', choose one of: {', '.join(sorted(BUILTINS))}"
            )
        dims = BUILTINS[name]
        if name == "quaternion":
            n = 4 if n is None else n
            if n % 4:
                raise ConfigError(f"Quaternion generators need n divisible by 4, got n={n}")
            m = 3 if m is None else m
        elif name == "clifford":
            if n is None or m is None:
                raise ConfigError("'builtin:clifford' needs both 'n' and 'm'")
        else:
            n = dims[0] if n is None else n
            m = dims[1] if m is None else m
        if dims is not None and name != "quaternion" and (n, m) != dims:
            raise ConfigError(f"'builtin:{name}' is fixed at n={dims[0]}, m={dims[1]}; got n={n}, m={m}")
        if name == "quaternion" and m != 3:
            raise ConfigError(f"'builtin:quaternion' has m=3, got m={m}")
        source = name
    else:
        matrices = _inline_matrices(generators)
        inferred = (len(matrices[0]), len(matrices))
        n = inferred[0] if n is None else n
        m = inferred[1] if m is None else m
        if (n, m) != inferred:
            raise ConfigError(f"Declared n={n}, m={m} but inline generators give n={inferred[0]}, m={inferred[1]}")
        source = "inline"

    if n < 2 or n % 2:
        raise ConfigError(f"Configuration key 'n' must be a positive even integer, got {n}")
    if m < 0:
        raise ConfigError(f"Configuration key 'm' must be non-negative, got {m}")
    p = _int(raw, "p", 0)
    if p < 0 or 2 * p > n:
        raise ConfigError(f"Configuration key 'p' must satisfy 0 <= p <= n/2 = {n // 2}, got {p}")
    return AlgebraSpec(n=n, m=m, p=p, source=source, matrices=matrices)


def parse_config(raw: Dict[str, Any]) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("Configuration must be a JSON object")
    unknown = sorted(set(raw) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")

    algebra = parse_algebra(raw)
    samples = _int(raw, "samples", 101)
    if samples < 2:
        raise ConfigError(f"Configuration key 'samples' must be at least 2, got {samples}")
    oracle_steps = _int(raw, "oracle_steps", 100_000)
    if oracle_steps < 10:
        raise ConfigError(f"Configuration key 'oracle_steps' must be at least 10, got {oracle_steps}")
    seed = _int(raw, "seed", 0)
    if seed < 0:
        raise ConfigError(f"Configuration key 'seed' must be non-negative, got {seed}")
    t0 = _float(raw, "t0", 0.0)
    t1 = _float(raw, "t1", 1.0)
    if not t0 < t1:
        raise ConfigError(f"Time range must satisfy t0 < t1, got [{t0}, {t1}]")
    out = str(raw.get("out") or "out")

    return RunConfig(
        algebra=algebra,
        u=_vector(raw, "u", algebra.m),
        v0dot=_vector(raw, "v0dot", algebra.n),
        u0dot=_vector(raw, "u0dot", algebra.m),
        t0=t0,
        t1=t1,
        samples=samples,
        seed=seed,
        out=out,
        oracle_steps=oracle_steps,
    )


def read_raw_config(path: str | Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"Configuration file '{path}' does not exist") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Configuration file '{path}' is not valid JSON: {exc}") from exc


def load_config(path: str | Path, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    raw = read_raw_config(path)
    if overrides:
        raw = {**raw, **{key: value for key, value in overrides.items() if value is not None}}
    return parse_config(raw)


def config_to_dict(cfg: RunConfig) -> Dict[str, Any]:
    algebra = cfg.algebra
    generators: Any = f"{BUILTIN_PREFIX}{algebra.source}" if algebra.is_builtin else [
        [list(row) for row in matrix] for matrix in algebra.matrices
    ]
    payload: Dict[str, Any] = {
        "n": algebra.n,
        "m": algebra.m,
        "p": algebra.p,
        "generators": generators,
        "t0": cfg.t0,
        "t1": cfg.t1,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "out": cfg.out,
        "oracle_steps": cfg.oracle_steps,
    }
    for key in ("u", "v0dot", "u0dot"):
        value: Optional[Tuple[float, ...]] = getattr(cfg, key)
        if value is not None:
            payload[key] = list(value)
    return payload


def parse_vector_flag(text: str) -> List[float]:
    """Parse a comma-separated CLI vector such as '1,0,0.5'."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"Cannot parse vector '{text}': expected comma-separated numbers") from exc
