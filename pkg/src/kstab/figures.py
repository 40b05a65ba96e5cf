"""Matplotlib summary figure for sweeps: both slacks against m."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .stability import SweepRecord


def render_sweep_figure(records: Sequence[SweepRecord], path: str | Path) -> None:
    """Plot the two cone slacks of every applicable record; format follows the suffix."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in records if r.verdict.slacks is not None]
    ms = [r.m for r in rows]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for idx, label in enumerate(("slack 1: x - (m-1)", "slack 2: x + y - (2m-4)")):
        ax.plot(ms, [float(r.verdict.slacks[idx]) for r in rows], marker=".", label=label)
    ax.axhline(0, color="black", linewidth=0.8)
    if rows:
        ax.set_title(f"{rows[0].family.value} family, m = {ms[0]}..{ms[-1]}")
    ax.set_xlabel("m")
    ax.set_ylabel("barycenter slack")
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    metadata = {"Date": None} if path.suffix.lower() in (".svg", ".pdf") else {"Software": None}
    with matplotlib.rc_context({"svg.hashsalt": "kstab"}):
        fig.savefig(path, metadata=metadata)
    plt.close(fig)
