"""Figure rendering for benchmark reports.

The bench command writes one log-log timing figure next to its CSV so a sweep
is readable at a glance without external tooling.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_benchmark_figure(rows, path: Path) -> Path:
    """One median-time curve per (algorithm, workers) over the sweep."""
    groups = {}
    for row in rows:
        key = (row["algorithm"], row["workers"])
        groups.setdefault(key, []).append((row["d"], row["median_ms"]))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (alg, workers), pts in sorted(groups.items()):
        pts.sort()
        label = alg if alg != "cvl" else f"cvl, {workers} worker{'s' if workers != 1 else ''}"
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("degree bound d")
    ax.set_ylabel("median wall time (ms)")
    ax.set_title("dense integer polynomial multiplication")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
