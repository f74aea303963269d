"""SVG figures of the 2D block projections of a geodesic."""
from __future__ import annotations

import logging
from pathlib import Path
from typing import List

import matplotlib

matplotlib.use("svg")
from matplotlib.figure import Figure  # noqa: E402

from .errors import ZeroCenterVelocityError  # noqa: E402
from .geodesic import GeodesicSolution, block_projections, reference_curve  # noqa: E402
from .spectral import CIRCULAR, HYPERBOLIC, SPIRAL_IN, SPIRAL_OUT  # noqa: E402

LOGGER = logging.getLogger("subsemi.plots")

SVG_HASHSALT = "subsemi"
TITLES = {
    HYPERBOLIC: "hyperbola branch",
    CIRCULAR: "circle",
    SPIRAL_OUT: "logarithmic spiral (expanding)",
    SPIRAL_IN: "logarithmic spiral (contracting)",
}


def plot_projections(
    sol: GeodesicSolution, t0: float, t1: float, samples: int, out_dir: str | Path
) -> List[Path]:
    """Write one SVG per 2x2 block of Dtilde; returns the written paths in block order."""
    if sol.is_straight:
        raise ZeroCenterVelocityError("Projection plots need u0dot != 0")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    matplotlib.rcParams["svg.hashsalt"] = SVG_HASHSALT

    step = (t1 - t0) / (samples - 1)
    times = [t0 + i * step for i in range(samples)]
    points = [block_projections(sol, t) for t in times]
    written: List[Path] = []
    for index, block in enumerate(sol.spec.blocks):
        xs = [projection[index][0] for projection in points]
        ys = [projection[index][1] for projection in points]
        curve = reference_curve(sol, index, t0, t1)

        fig = Figure(figsize=(5, 5))
        ax = fig.add_subplot(1, 1, 1)
        ax.plot(curve[:, 0], curve[:, 1], color="0.6", linewidth=1.0, label="reference")
        ax.plot(xs, ys, "o", markersize=3, color="tab:blue", label=f"v(t), t in [{t0:g}, {t1:g}]")
        ax.set_xlabel(f"coordinate {block.start + 1}")
        ax.set_ylabel(f"coordinate {block.start + 2}")
        ax.set_title(f"block {index + 1}: {TITLES[block.kind]}")
        ax.axhline(0.0, color="0.85", linewidth=0.5)
        ax.axvline(0.0, color="0.85", linewidth=0.5)
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(loc="best", fontsize="small")

        path = out_dir / f"block{index + 1:02d}_{block.kind}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        written.append(path)
    LOGGER.info("Wrote %d projection plots to %s", len(written), out_dir)
    return written
