"""Four figure kinds over the sweep and detail artifacts.

Pixel content derives only from the input files; nothing is recomputed.
"""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import TwoSlopeNorm

from .io import FigsError, read_detail, read_table

DPI = 150
STRATEGIES = ("UU", "UF", "FU", "FF")
KINDS = ("norm-scatter", "invasion-panel", "reputation-panel", "param-curves")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: str
    out: str
    threshold: float = 0.55

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigsError(f"unknown figure kind '{self.kind}' (pick from {KINDS})")


def norm_scatter(table, threshold):
    labels = table.floats("label")
    f = table.floats("F")
    fig, ax = plt.subplots(figsize=(7.5, 4))
    split = [(x, y) for x, y in zip(labels, f) if y <= threshold], [
        (x, y) for x, y in zip(labels, f) if y > threshold
    ]
    for pts, color in zip(split, ("tab:gray", "tab:orange")):
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=14, color=color)
    ax.axhline(threshold, linestyle="--", linewidth=1, color="tab:red")
    ax.set_xlabel("norm label")
    ax.set_ylabel("fairness level")
    ax.set_ylim(0, 1)
    ax.set_title(f"fairness by norm, {table.meta.get('scenario', '')}")
    return fig


def invasion_panel(doc):
    z = doc["params"]["z"]
    fig, (ax_phi, ax_rho) = plt.subplots(
        1, 2, figsize=(9, 4), layout="constrained"
    )
    fig.suptitle(f"norm {doc['label']}, {doc.get('scenario', '')}")

    phi = [doc["phi"][s] for s in STRATEGIES]
    ax_phi.bar(range(4), phi, color="tab:blue", tick_label=list(STRATEGIES))
    ax_phi.set_ylabel("stationary strategy share")
    ax_phi.set_ylim(0, 1)

    grid = np.full((4, 4), np.nan)
    for i, x in enumerate(STRATEGIES):
        for j, y in enumerate(STRATEGIES):
            if y in doc["rho"].get(x, {}):
                grid[i, j] = doc["rho"][x][y] * z
    top = max(1.5, float(np.nanmax(grid)) * 1.05)
    ax_rho.imshow(grid, cmap="coolwarm", norm=TwoSlopeNorm(1.0, 0.0, top))
    for i in range(4):
        for j in range(4):
            if not np.isnan(grid[i, j]):
                ax_rho.text(j, i, f"{grid[i, j]:.2f}", ha="center", va="center")
    ax_rho.set_xticks(range(4), STRATEGIES)
    ax_rho.set_yticks(range(4), STRATEGIES)
    ax_rho.set_xlabel("resident")
    ax_rho.set_ylabel("mutant")
    ax_rho.set_title("fixation probability over neutral")
    return fig


def reputation_panel(table):
    fig, ax = plt.subplots(figsize=(6.5, 4))
    i = table.floats("i")
    for s in STRATEGIES:
        ax.plot(i, table.floats(f"v_{s}"), marker=".", label=s)
    ax.set_xlabel("players in good standing")
    ax.set_ylabel("stationary probability")
    ax.set_title(f"reputation profile, norm {table.meta.get('norm', '?')}")
    ax.legend(title="strategy")
    return fig


def param_curves(table):
    series = {}
    for v, lab, y in zip(
        table.floats("value"), table.column("label"), table.floats("F")
    ):
        series.setdefault(int(lab), []).append((v, y))
    fig, ax = plt.subplots(figsize=(6.5, 4))
    for lab in sorted(series):
        pts = sorted(series[lab])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker=".", label=str(lab))
    ax.set_xlabel(table.meta.get("grid-over", "grid value"))
    ax.set_ylabel("fairness level")
    ax.set_ylim(0, 1)
    ax.legend(title="norm", fontsize="small", ncols=2 if len(series) > 8 else 1)
    return fig


def build_figure(spec: FigureSpec):
    """Figure object for a spec; lets tests poke at artists before saving."""
    if spec.kind == "norm-scatter":
        return norm_scatter(read_table(spec.source), spec.threshold)
    if spec.kind == "invasion-panel":
        return invasion_panel(read_detail(spec.source))
    if spec.kind == "reputation-panel":
        return reputation_panel(read_table(spec.source))
    return param_curves(read_table(spec.source))


def render(spec: FigureSpec):
    # inputs are validated before the output path is touched
    fig = build_figure(spec)
    try:
        fig.savefig(spec.out, dpi=DPI, metadata={"Software": None})
    finally:
        plt.close(fig)
