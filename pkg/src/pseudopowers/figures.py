"""Render summary figures for a scenario result next to its CSV output.

Figures are presentation artifacts derived entirely from the emitted
data; they are not covered by the determinism digests (the delimited and
JSON outputs are the canonical boundary).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .constants import ThresholdTable
from .experiments import ScenarioResult


def _window_label(lo: int, hi: int) -> str:
    return f"[{lo:g}, {hi:g}]"


def density_figure(result: ScenarioResult, path: Path) -> Path:
    table = ThresholdTable.for_s(result.config.s)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    n_windows = len(result.config.windows)
    for wi in range(n_windows):
        xs = [t.trial_id for t in result.trials]
        ys = [t.windows[wi].density for t in result.trials]
        lo, hi = result.config.windows[wi]
        ax.plot(xs, ys, "o", ms=4, label=f"window {_window_label(lo, hi)}")
    ax.axhline(table.sumset_density, color="k", lw=1, ls="--",
               label=r"$1 - e^{-\lambda_s}$ = " + f"{table.sumset_density:.4f}")
    ax.set_xlabel("trial")
    ax.set_ylabel("sumset density")
    ax.set_title(f"s={result.config.s}, N={result.config.N}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def dyadic_figure(result: ScenarioResult, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    plotted = False
    for trial in result.trials:
        w = trial.windows[0]
        if not w.dyadic_counts:
            continue
        los = [d[0] for d in w.dyadic_counts]
        counts = [d[2] for d in w.dyadic_counts]
        ax.step(los, counts, where="post", alpha=0.6, label=f"trial {trial.trial_id}")
        plotted = True
    ax.set_xscale("log", base=2)
    ax.set_xlabel("dyadic window start")
    ax.set_ylabel("exceptional count")
    ax.set_title("exceptional integers per dyadic window")
    if plotted and len(result.trials) <= 12:
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def gap_ratio_figure(result: ScenarioResult, path: Path) -> Path:
    table = ThresholdTable.for_s(result.config.s)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    xs, ys = [], []
    for trial in result.trials:
        for w in trial.windows:
            if w.max_gap_ratio is not None:
                xs.append(trial.trial_id)
                ys.append(w.max_gap_ratio)
    ax.plot(xs, ys, "s", ms=4, color="tab:red")
    ax.axhline(table.inv_lambda_s, color="k", lw=1, ls="--",
               label=r"$1/\lambda_s$ = " + f"{table.inv_lambda_s:.4f}")
    ax.set_xlabel("trial")
    ax.set_ylabel("max gap / log(left endpoint)")
    ax.set_title("largest normalized sumset gap per window")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def exceptional_counts_figure(result: ScenarioResult, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    xs = [t.trial_id for t in result.trials]
    if result.config.scenario == "complement":
        ys = [t.x_count for t in result.trials]
        label = "exceptional in [N/2, N]"
    else:
        ys = [t.windows[0].exceptional_count for t in result.trials]
        label = "exceptional in first window"
    ax.bar(xs, ys, color="tab:blue", alpha=0.8)
    if result.x_mean is not None:
        ax.axhline(result.x_mean, color="k", lw=1, ls="--", label=f"mean = {result.x_mean:.2f}")
        ax.axhline(result.x_mean / 2, color="gray", lw=1, ls=":", label="mean / 2")
        ax.legend(fontsize=8)
    ax.set_xlabel("trial")
    ax.set_ylabel(label)
    ax.set_title(f"{result.config.scenario} scenario, N={result.config.N}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_figures(result: ScenarioResult, out_dir) -> list[Path]:
    """Write all applicable figures into out_dir/figures; return the paths."""
    fig_dir = Path(out_dir) / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    paths = [
        density_figure(result, fig_dir / "density.png"),
        dyadic_figure(result, fig_dir / "dyadic_exceptional.png"),
        gap_ratio_figure(result, fig_dir / "gap_ratio.png"),
        exceptional_counts_figure(result, fig_dir / "exceptional_counts.png"),
    ]
    return paths
