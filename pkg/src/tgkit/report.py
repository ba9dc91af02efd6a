"""Figure rendering for CLI report paths.

All functions save to a file and never open an interactive window; the
Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def plot_snapshot_counts(
    counts: np.ndarray, labels: np.ndarray, path: str | Path, title: str = ""
) -> None:
    """Bar chart of per-snapshot edge counts, growth snapshots highlighted."""
    counts = np.asarray(counts)
    fig, ax = plt.subplots(figsize=(8, 4))
    colors = ["#7fa8d9"] * len(counts)
    for i, grew in enumerate(np.asarray(labels)):
        if grew:
            colors[i + 1] = "#3c78b4"
    ax.bar(np.arange(len(counts)), counts, color=colors, width=0.9)
    ax.set_xlabel("snapshot")
    ax.set_ylabel("edge events")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_event_rate(edge_t: np.ndarray, path: str | Path, bins: int = 100) -> None:
    """Histogram of edge events over the time axis."""
    fig, ax = plt.subplots(figsize=(8, 4))
    if len(edge_t):
        ax.hist(edge_t, bins=min(bins, max(1, len(np.unique(edge_t)))), color="#3c78b4")
    ax.set_xlabel("timestamp")
    ax.set_ylabel("edge events")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_bench(times: dict[str, float], path: str | Path) -> None:
    """Horizontal bar chart comparing implementation timings (seconds)."""
    fig, ax = plt.subplots(figsize=(6, 2 + 0.6 * len(times)))
    names = list(times)
    values = [times[n] for n in names]
    ax.barh(names, values, color=["#3c78b4", "#c46f4e"][: len(names)])
    ax.set_xlabel("seconds")
    for i, v in enumerate(values):
        ax.text(v, i, f" {v:.3f}s", va="center")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
