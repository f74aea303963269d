"""File emitters for CLI results. Floats are written with repr so they round-trip exactly."""
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, List

from .geodesic import Trajectory

LOGGER = logging.getLogger("subsemi.output")


def trajectory_header(n: int, m: int) -> List[str]:
    return (
        ["t"]
        + [f"v{i}" for i in range(1, n + 1)]
        + [f"u{a}" for a in range(1, m + 1)]
        + [f"dv{i}" for i in range(1, n + 1)]
        + [f"du{a}" for a in range(1, m + 1)]
        + ["causal"]
    )


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = len(traj.states[0].v) if len(traj) else 0
    m = len(traj.states[0].u) if len(traj) else 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(trajectory_header(n, m))
        for t, state, vel in zip(traj.times, traj.states, traj.velocities):
            values = [float(t), *state.v, *state.u, *vel.dv, *vel.du]
            writer.writerow([repr(float(x)) for x in values] + [traj.causal.value])
    LOGGER.info("Wrote %d trajectory rows to %s", len(traj), path)
    return path


def dumps_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def write_json(payload: Any, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload) + "\n", encoding="utf-8")
    LOGGER.info("Wrote %s", path)
    return path
