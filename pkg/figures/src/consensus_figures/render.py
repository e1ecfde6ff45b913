"""Figure rendering: one deterministic image per CSV artifact.

Histograms annotate the mean convergence time (the mu label); the
trajectory figure draws the zeros and collisions curves against the step
axis; the comparison figure overlays the paired basic/waiting runtimes.
Rendering returns the annotation statistics so callers and tests can
hold them against the raw CSV columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .tables import read_comparison, read_trajectory, read_trials  # noqa: E402

KINDS = ("histogram", "trajectory", "comparison")
HIST_BINS = 30
FIGSIZE = (6.4, 4.2)
DPI = 150


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: str | Path
    out: str | Path
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class RenderStats:
    """What got drawn: the annotation values, recomputable from the CSV."""

    kind: str
    rows: int
    mu: float | None = None
    mu_label: str | None = None
    mu_basic: float | None = None
    mu_waiting: float | None = None


def _new_axes(title: str | None):
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    if title:
        ax.set_title(title)
    return fig, ax


def _render_histogram(spec: FigureSpec):
    table = read_trials(spec.source)
    steps = table.decided_steps
    if len(steps) == 0:
        raise ValueError(f"{spec.source}: no decided trials to bin")
    mu = float(steps.mean())
    label = f"$\\mu$ = {mu:.1f}"
    fig, ax = _new_axes(spec.title)
    ax.hist(steps, bins=HIST_BINS, color="#4878a8", edgecolor="white")
    ax.axvline(mu, color="#b2182b", linestyle="--", linewidth=1.2, label=label)
    ax.set_xlabel("big steps to consensus")
    ax.set_ylabel("trials")
    ax.legend(frameon=False)
    stats = RenderStats(kind="histogram", rows=len(table.big_steps), mu=mu, mu_label=label)
    return fig, stats


def _render_trajectory(spec: FigureSpec):
    table = read_trajectory(spec.source)
    fig, ax = _new_axes(spec.title)
    ax.plot(table.steps, table.zeros, color="#4878a8", label="zeros")
    ax.plot(table.steps, table.collisions, color="#b2182b", label="collisions")
    ax.set_xlabel("big step")
    ax.set_ylabel("count")
    ax.legend(frameon=False)
    stats = RenderStats(kind="trajectory", rows=len(table.steps))
    return fig, stats


def _render_comparison(spec: FigureSpec):
    table = read_comparison(spec.source)
    mu_a = float(table.basic_steps.mean())
    mu_b = float(table.waiting_steps.mean())
    fig, ax = _new_axes(spec.title)
    ax.hist(table.basic_steps, bins=HIST_BINS, alpha=0.65, color="#4878a8",
            label=f"basic ($\\mu$ = {mu_a:.1f})")
    ax.hist(table.waiting_steps, bins=HIST_BINS, alpha=0.65, color="#e08214",
            label=f"waiting ($\\mu$ = {mu_b:.1f})")
    ax.axvline(mu_a, color="#4878a8", linestyle="--", linewidth=1.2)
    ax.axvline(mu_b, color="#e08214", linestyle="--", linewidth=1.2)
    ax.set_xlabel("big steps to consensus")
    ax.set_ylabel("trials")
    ax.legend(frameon=False)
    stats = RenderStats(kind="comparison", rows=len(table.seeds),
                        mu_basic=mu_a, mu_waiting=mu_b)
    return fig, stats


_RENDERERS = {
    "histogram": _render_histogram,
    "trajectory": _render_trajectory,
    "comparison": _render_comparison,
}


def render(spec: FigureSpec) -> RenderStats:
    """Validate the CSV, draw the figure, write the image, return the
    annotation statistics. On any validation error no image is written."""
    fig, stats = _RENDERERS[spec.kind](spec)
    try:
        out = Path(spec.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out)
    finally:
        plt.close(fig)
    return stats
