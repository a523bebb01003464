"""Matplotlib rendering of the report figures (SVG, headless, deterministic)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "affine-smile"

import matplotlib.pyplot as plt  # noqa: E402

# one (label, xs, ys) triple per overlaid curve
Series = tuple[str, Sequence[float], Sequence[float]]

_SAVE_OPTS = {"format": "svg", "metadata": {"Date": None}, "bbox_inches": "tight"}


def curve_overlay(
    path: str,
    series: list[Series],
    xlabel: str,
    ylabel: str,
    zoom: bool = False,
    zoom_fraction: float = 0.02,
) -> None:
    """Overlaid line plot; with ``zoom`` adds a right panel near the minimum."""
    ncols = 2 if zoom else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6.0 * ncols, 4.0))
    axes = [axes] if ncols == 1 else list(axes)

    for label, xs, ys in series:
        axes[0].plot(xs, ys, label=label, linewidth=1.2)
    axes[0].set_xlabel(xlabel)
    axes[0].set_ylabel(ylabel)
    axes[0].legend()
    axes[0].grid(alpha=0.3)

    if zoom:
        top = max(max(ys) for _, _, ys in series)
        cut = zoom_fraction * top
        lo = min(
            (x for _, xs, ys in series for x, y in zip(xs, ys) if y <= cut),
            default=None,
        )
        hi = max(
            (x for _, xs, ys in series for x, y in zip(xs, ys) if y <= cut),
            default=None,
        )
        for label, xs, ys in series:
            axes[1].plot(xs, ys, label=label, linewidth=1.2)
        if lo is not None and hi is not None and hi > lo:
            pad = 0.1 * (hi - lo)
            axes[1].set_xlim(lo - pad, hi + pad)
            axes[1].set_ylim(-0.05 * cut, 1.5 * cut)
        axes[1].set_xlabel(xlabel)
        axes[1].set_ylabel(ylabel)
        axes[1].grid(alpha=0.3)
        axes[1].set_title("detail near the minimum", fontsize=10)

    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def wing_ratio_plot(path: str, series: list[Series], side: str) -> None:
    """Variance-to-moneyness ratio against maturity, one marker line per label."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ts, ratios in series:
        ax.plot(ts, ratios, marker="o", label=label, linewidth=1.2)
    ax.set_xlabel("maturity")
    ax.set_ylabel("implied variance / |log-moneyness|")
    ax.set_title(f"{side} wing", fontsize=10)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
