"""Render scan results as a classification map.

Uses the object-oriented matplotlib API with the Agg canvas so that no
global pyplot state is touched.
"""

from __future__ import annotations

import math
import os
from typing import Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure
from matplotlib.lines import Line2D

from gaussmaj.classifier import Category
from gaussmaj.scan import ScanRecord

COLORS = {
    Category.GLOCC_FORWARD: "#b8e6b0",
    Category.LOCC_FORWARD_NONGAUSSIAN_CRITERION: "#2e8b3a",
    Category.LOCC_FORWARD_NUMERIC: "#66cc33",
    Category.LOCC_REVERSE_ONLY_GLOCC: "#b9d4f0",
    Category.LOCC_REVERSE_ONLY_CRITERION: "#1f4e9c",
    Category.LOCC_REVERSE_ONLY_NUMERIC: "#4c8fe0",
    Category.INCOMPARABLE: "#d62728",
    Category.UNDECIDED: "#7f7f7f",
}

LABELS = {
    Category.GLOCC_FORWARD: "Gaussian LOCC",
    Category.LOCC_FORWARD_NONGAUSSIAN_CRITERION: "LOCC (criterion)",
    Category.LOCC_FORWARD_NUMERIC: "LOCC (numeric)",
    Category.LOCC_REVERSE_ONLY_GLOCC: "reverse only, Gaussian",
    Category.LOCC_REVERSE_ONLY_CRITERION: "reverse only (criterion)",
    Category.LOCC_REVERSE_ONLY_NUMERIC: "reverse only (numeric)",
    Category.INCOMPARABLE: "incomparable",
    Category.UNDECIDED: "undecided",
}


def _draw_product_contour(ax, records, attr, color):
    x = np.array([r.x for r in records])
    y = np.array([r.y for r in records])
    z = np.array([math.log(getattr(r, attr)) if getattr(r, attr) > 0 else -50.0 for r in records])
    if len(records) < 3 or z.min() > 0 or z.max() < 0:
        return
    ax.tricontour(x, y, z, levels=[0.0], colors=[color], linewidths=1.5)


def _smallest_gap(v: np.ndarray) -> float:
    gaps = np.diff(np.unique(v))
    gaps = gaps[gaps > 1e-12]
    return float(gaps.min()) if gaps.size else 1.0


def _cell_size(fig, ax, x, y) -> float:
    """Marker area (points^2) so that neighbouring grid cells touch."""
    bbox = ax.get_position()
    width_pt = bbox.width * fig.get_figwidth() * 72
    height_pt = bbox.height * fig.get_figheight() * 72
    sx = width_pt * _smallest_gap(x) / max(np.ptp(x), 1e-12)
    sy = height_pt * _smallest_gap(y) / max(np.ptp(y), 1e-12)
    return max(1.0, 1.2 * max(sx, sy)) ** 2


def plot_scan(
    records: Sequence[ScanRecord],
    base_r: Sequence[float],
    path: str | os.PathLike,
    title: str | None = None,
    dpi: int = 150,
) -> None:
    """Save a scatter map of ``records`` in the ``(r'_1 - r'_2, r'_1 + r'_2)`` plane.

    Dashed lines mark ``r'_1 = r_1`` and ``r'_2 = r_2``; solid lines mark
    where the channel-product criterion holds with equality in each
    direction.
    """
    if not records:
        raise ValueError("nothing to plot")
    fig = Figure(figsize=(7, 6))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(111)

    cats = [r.category for r in records]
    x = np.array([r.x for r in records])
    y = np.array([r.y for r in records])
    size = _cell_size(fig, ax, x, y)
    for cat in Category:
        mask = np.array([c is cat for c in cats])
        if mask.any():
            ax.scatter(x[mask], y[mask], s=size, c=COLORS[cat], marker="s", linewidths=0)

    _draw_product_contour(ax, records, "product_forward", "#145a1e")
    _draw_product_contour(ax, records, "product_reverse", "#0b2d66")

    r1, r2 = base_r
    xs = np.array([x.min(), x.max()])
    ax.plot(xs, xs + 2 * r2, "k--", lw=0.8)
    ax.plot(xs, 2 * r1 - xs, "k--", lw=0.8)
    ax.plot([r1 - r2], [r1 + r2], "ko", ms=4)

    ax.set_xlim(x.min(), x.max())
    ax.set_ylim(y.min(), y.max())
    ax.set_xlabel(r"$r'_1 - r'_2$")
    ax.set_ylabel(r"$r'_1 + r'_2$")
    ax.set_title(title or f"initial state r = ({r1:g}, {r2:g})")
    present = [c for c in Category if c in set(cats)]
    handles = [
        Line2D([], [], marker="s", ls="", color=COLORS[c], label=LABELS[c]) for c in present
    ]
    ax.legend(handles=handles, loc="upper left", fontsize=7, framealpha=0.9)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
