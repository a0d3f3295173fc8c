"""Deterministic SVG figures (no timestamps, fixed hash salt)."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lexicon.stats import eval_gaussian  # noqa: E402


def _svg(fig):
    buf = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "morphoforge", "svg.fonttype": "none"}):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def gaussian_svg(histogram, fit):
    xs = sorted(histogram)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(xs, [histogram[x] for x in xs], color="#9ab", label="stems")
    grid = np.linspace(min(xs), max(xs), 200)
    ax.plot(grid, eval_gaussian(fit, grid), color="#c33",
            label=f"A={fit.amplitude:.4g}, μ={fit.center:.3g}, w={fit.width:.3g}, R²={fit.r_squared:.4f}")
    ax.set_xlabel("stem length (symbols)")
    ax.set_ylabel("number of stems")
    ax.legend(fontsize=8)
    return _svg(fig)


def pareto_svg(points, front, selected_id=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([p.time for p in points], [p.hardware for p in points], color="#999", label="candidates")
    ax.plot([p.time for p in front], [p.hardware for p in front], "o-", color="#c33", label="Pareto front")
    for p in points:
        ax.annotate(str(p.id), (p.time, p.hardware), fontsize=7, xytext=(3, 3), textcoords="offset points")
    if selected_id is not None:
        sel = [p for p in points if p.id == selected_id]
        ax.scatter([p.time for p in sel], [p.hardware for p in sel], s=120, facecolors="none",
                   edgecolors="k", label="selected")
    unit_t = points[0].time_unit or "time"
    unit_q = points[0].hardware_unit or "hardware"
    ax.set_xlabel(f"T ({unit_t})")
    ax.set_ylabel(f"Q ({unit_q})")
    ax.legend(fontsize=8)
    return _svg(fig)


def bench_svg(summary):
    fig, ax = plt.subplots(figsize=(6, 4))
    sizes = [s["lexiconSize"] for s in summary]
    ax.plot(sizes, [s["ampCyclesMedian"] for s in summary], "o-", label="processor cycles (median)")
    ax.plot(sizes, [s["scanComparisonsMedian"] for s in summary], "s-", label="scan comparisons (median)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("lexicon size (entries)")
    ax.legend(fontsize=8)
    return _svg(fig)
