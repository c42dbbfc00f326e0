"""Static phase-diagram rendering.

One panel per checkpoint: each sample is a circle at its (a0, b)
coordinates, coloured by the sign of the mean belief at that checkpoint,
with area proportional to its magnitude over the full scale of 4.  Circles
are filled once the run has halted by stability, hollow otherwise.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import PhasePoint, classify

CLASS_COLORS = {
    "belief": (0.12, 0.47, 0.71, 1.0),
    "disbelief": (0.84, 0.15, 0.16, 1.0),
    "undecided": (0.0, 0.0, 0.0, 1.0),
}

_HOLLOW = (0.0, 0.0, 0.0, 0.0)
_MIN_AREA = 6.0
_MAX_AREA = 60.0


def render_phase_diagram(
    points: list[PhasePoint],
    checkpoints: tuple[int, ...],
    path: str | Path,
    title: str = "",
) -> Path:
    n_panels = len(checkpoints)
    ncols = 2 if n_panels > 1 else 1
    nrows = math.ceil(n_panels / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.8 * ncols, 3.9 * nrows), squeeze=False
    )
    for k, cp in enumerate(checkpoints):
        ax = axes[k // ncols][k % ncols]
        xs, ys, areas, faces, edges = [], [], [], [], []
        for p in points:
            mean = p.mean_beliefs[cp]
            colour = CLASS_COLORS[classify(mean)]
            filled = p.halted_by_stability and p.halt_step <= cp
            xs.append(p.a0)
            ys.append(p.b)
            areas.append(_MIN_AREA + _MAX_AREA * abs(float(mean)) / 4.0)
            faces.append(colour if filled else _HOLLOW)
            edges.append(colour)
        ax.scatter(xs, ys, s=areas, facecolors=faces, edgecolors=edges, linewidths=0.7)
        ax.set_title(f"j = {cp}")
        ax.set_xlabel("a0")
        ax.set_ylabel("b")
    for k in range(n_panels, nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
