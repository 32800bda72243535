"""Figure rendering for experiment reports, rewiring runs, and score
distributions.

All functions write a file and return its path; nothing is shown
interactively (the Agg backend is forced so rendering works headless).
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .evaluate import ScoreDistribution
from .experiment import ReportRow

_DPI = 150


def plot_precision_vs_clustering(
    report: Sequence[ReportRow], path: str | Path
) -> Path:
    """Mean precision against achieved clustering, one line per method.

    Rows without a precision aggregate (all trials flagged) are skipped;
    error bars show the across-trial standard deviation where available.
    """
    path = Path(path)
    methods: list[str] = []
    for row in report:
        if row.method not in methods:
            methods.append(row.method)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    plotted = False
    for method in methods:
        rows = [r for r in report if r.method == method and r.precision_mean is not None]
        if not rows:
            continue
        rows.sort(key=lambda r: r.achieved_c)
        xs = [r.achieved_c for r in rows]
        ys = [r.precision_mean for r in rows]
        errs = [r.precision_sd if r.precision_sd is not None else 0.0 for r in rows]
        ax.errorbar(xs, ys, yerr=errs, marker="o", ms=4, capsize=2, label=method)
        plotted = True
    ax.set_xlabel("averaged clustering coefficient")
    ax.set_ylabel("precision")
    if plotted:
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_separation_vs_clustering(
    report: Sequence[ReportRow], path: str | Path
) -> Path:
    """Mean score-class separation against achieved clustering, per method."""
    path = Path(path)
    methods: list[str] = []
    for row in report:
        if row.method not in methods:
            methods.append(row.method)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    plotted = False
    for method in methods:
        rows = [
            r for r in report if r.method == method and r.separation_mean is not None
        ]
        if not rows:
            continue
        rows.sort(key=lambda r: r.achieved_c)
        ax.plot(
            [r.achieved_c for r in rows],
            [r.separation_mean for r in rows],
            marker="o",
            ms=4,
            label=method,
        )
        plotted = True
    ax.set_xlabel("averaged clustering coefficient")
    ax.set_ylabel("standardized mean score difference")
    if plotted:
        ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_trajectory(
    trajectory: Iterable[tuple[int, int, float]], path: str | Path
) -> Path:
    """Clustering (left axis) and triangle count (right axis) over steps."""
    path = Path(path)
    points = list(trajectory)
    steps = [p[0] for p in points]
    tris = [p[1] for p in points]
    cs = [p[2] for p in points]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(steps, cs, color="tab:blue", lw=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel("averaged clustering coefficient", color="tab:blue")
    ax.tick_params(axis="y", labelcolor="tab:blue")
    ax2 = ax.twinx()
    ax2.plot(steps, tris, color="tab:orange", lw=1.2)
    ax2.set_ylabel("triangles", color="tab:orange")
    ax2.tick_params(axis="y", labelcolor="tab:orange")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def plot_score_distribution(dist: ScoreDistribution, path: str | Path) -> Path:
    """Per-class score histograms as within-class fractions.

    The classes differ in size by orders of magnitude, so bins are
    normalized to fractions of their class and the y axis is logarithmic.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    w = dist.bin_width
    for name, hist, total, color in (
        ("test edges", dist.positive_hist, dist.positive_total, "tab:green"),
        ("non-edges", dist.negative_hist, dist.negative_sampled, "tab:red"),
    ):
        if total == 0 or not hist:
            continue
        xs = [idx * w + w / 2 for idx in sorted(hist)]
        ys = [hist[idx] / total for idx in sorted(hist)]
        ax.plot(xs, ys, drawstyle="steps-mid", label=name, color=color, lw=1.2)
    ax.set_yscale("log")
    ax.set_xlabel("score")
    ax.set_ylabel("fraction of class")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
