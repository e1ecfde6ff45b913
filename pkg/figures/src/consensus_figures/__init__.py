"""Batch figure rendering for the strand-consensus simulator's CSV artifacts."""

from .render import KINDS, FigureSpec, RenderStats, render
from .tables import (
    SchemaError,
    read_comparison,
    read_trajectory,
    read_trials,
)

__version__ = "0.1.0"
