"""Matplotlib figures written next to the CSV outputs."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": (6.0, 3.7),
    "svg.hashsalt": "batteryevo",  # stable element ids across runs
    "svg.fonttype": "none",
}
COLORS = {"baseline": "tab:blue", "battery": "tab:orange"}
LABELS = {
    "speed": "speed (cm/s)",
    "battery": "remaining battery",
    "balance": "balance",
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fmt = path.suffix.lstrip(".") or "svg"
    fig.savefig(path, format=fmt, metadata={"Date": None} if fmt == "svg" else None)
    plt.close(fig)
    return path


def emit_svg_plot(summaries, path, metric: str | None = None):
    """Median line and Q1-Q3 band per experiment over generations.

    ``summaries`` holds summary.csv rows for one metric (or several, with
    ``metric`` picking one).  Each series gets a group id ``median-<exp>``
    and a band group ``band-<exp>`` in the SVG.
    """
    rows = [s for s in summaries if metric is None or s["metric"] == metric]
    if not rows:
        raise ValueError("no summaries to plot")
    metric = metric or rows[0]["metric"]
    series = defaultdict(list)
    for s in rows:
        series[s["experiment"]].append(s)

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for exp in sorted(series):
            pts = sorted(series[exp], key=lambda s: int(s["generation"]))
            gen = [int(s["generation"]) for s in pts]
            color = COLORS.get(exp)
            band = ax.fill_between(gen, [float(s["q1"]) for s in pts],
                                   [float(s["q3"]) for s in pts], color=color,
                                   alpha=0.25, linewidth=0)
            band.set_gid(f"band-{exp}")
            (line,) = ax.plot(gen, [float(s["median"]) for s in pts], color=color,
                              label=exp, marker="o" if len(gen) == 1 else None)
            line.set_gid(f"median-{exp}")
        ax.set_xlabel("generation")
        ax.set_ylabel(LABELS.get(metric, metric))
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def emit_pareto_plot(rows, path, x="speed_cms", y="battery_remaining"):
    """Scatter of pooled robots with the non-dominated ones in red."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to plot")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        dom = [r for r in rows if not int(r["nondominated"])]
        nd = sorted((r for r in rows if int(r["nondominated"])), key=lambda r: float(r[x]))
        pts = ax.scatter([float(r[x]) for r in dom], [float(r[y]) for r in dom],
                         s=8, color="0.6", label="dominated")
        pts.set_gid("dominated")
        front = ax.plot([float(r[x]) for r in nd], [float(r[y]) for r in nd], "o-",
                        ms=4, color="red", label="non-dominated")[0]
        front.set_gid("nondominated")
        ax.set_xlabel(LABELS["speed"])
        ax.set_ylabel(LABELS["battery"])
        ax.legend(frameon=False)
        fig.tight_layout()
        return _save(fig, path)
