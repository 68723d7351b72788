"""Figures for the curve and usage reports.

Figures are written straight to disk with the non-interactive Agg backend.
"""

from __future__ import annotations

import os
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import CapacityCurvePoint, UsageStats  # noqa: E402

PathLike = Union[str, os.PathLike]


def _savefig(fig, path: PathLike, dpi: int = 150) -> None:
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    plt.close(fig)


def plot_capacity_curve(points: Sequence[CapacityCurvePoint], path: PathLike) -> None:
    """Bits per block against ``q``: entropy bound vs. optimal code, with redundancy below."""
    q = np.array([p.q for p in points])
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(6.4, 6.0), sharex=True, gridspec_kw={"height_ratios": [2, 1]}
    )
    top.plot(q, [p.entropy_bound for p in points], "k-", label=r"bound $\log_2 q$")
    top.plot(q, [p.achievable for p in points], "o-", ms=3, color="C0", label="optimal binary code")
    top.set_ylabel("bits per block")
    top.legend(loc="lower right", frameon=False)
    top.grid(alpha=0.3)

    bottom.plot(q, [p.redundancy for p in points], "s-", ms=3, color="C3")
    bottom.set_ylabel("redundancy")
    bottom.set_xlabel("stego states $q$")
    bottom.grid(alpha=0.3)
    _savefig(fig, path)


def plot_usage(stats: UsageStats, path: PathLike) -> None:
    """Expected vs. empirical state frequencies as paired bars."""
    idx = np.arange(stats.q)
    width = 0.4
    fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * stats.q + 2), 3.6))
    ax.bar(idx - width / 2, [float(p) for p in stats.expected], width, label="expected", color="0.6")
    ax.bar(idx + width / 2, stats.empirical, width, label="empirical", color="C0")
    ax.set_xlabel("state index")
    ax.set_ylabel("frequency")
    ax.set_title(f"q={stats.q}, N={stats.block_count}, TV={stats.tv_distance:.4f}", fontsize=10)
    ax.legend(frameon=False)
    _savefig(fig, path)
