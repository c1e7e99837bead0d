"""Figure rendering for the report paths: size growth curves and bench times.

Figures land next to the delimited output; everything renders through the
Agg backend so no display is needed.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import TIMEOUT, BenchResult
from .encoders import CountReport


def save_growth_figure(reports: Sequence[CountReport], path: str) -> None:
    """Clause and auxiliary-variable growth against n for one encoding sweep."""
    if not reports:
        raise ValueError("nothing to plot")
    ns = [r.n for r in reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [r.clauses for r in reports], "o-", label="clauses")
    ax.plot(ns, [r.aux_vars for r in reports], "s--", label="aux vars")
    ax.set_xlabel("n")
    ax.set_ylabel("count")
    ax.set_title(f"{reports[0].encoding} size growth (k={reports[0].k})")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bench_figure(results: Sequence[BenchResult], path: str, timeout_s: float) -> None:
    """Grouped bars of total time per instance and encoding; timeouts hatched."""
    if not results:
        raise ValueError("nothing to plot")
    instances: list[str] = []
    encodings: list[str] = []
    for r in results:
        column = r.amk if r.amo != r.amk else r.amo
        if r.instance not in instances:
            instances.append(r.instance)
        if column not in encodings:
            encodings.append(column)

    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(instances)), 4))
    group_width = 0.8
    bar_width = group_width / max(1, len(encodings))
    for col_idx, enc in enumerate(encodings):
        xs, heights, hatches = [], [], []
        for row_idx, label in enumerate(instances):
            for r in results:
                column = r.amk if r.amo != r.amk else r.amo
                if r.instance == label and column == enc:
                    xs.append(row_idx - group_width / 2 + (col_idx + 0.5) * bar_width)
                    timed_out = r.verdict == TIMEOUT
                    heights.append(timeout_s if timed_out else r.total_s)
                    hatches.append("//" if timed_out else "")
                    break
        bars = ax.bar(xs, heights, width=bar_width, label=enc)
        for bar, hatch in zip(bars, hatches):
            bar.set_hatch(hatch)
    ax.set_xticks(range(len(instances)))
    ax.set_xticklabels(instances, rotation=30, ha="right")
    ax.set_ylabel("total time (s)")
    ax.set_title("pigeonhole bench (hatched = timeout)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
