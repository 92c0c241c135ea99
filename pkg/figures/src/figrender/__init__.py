"""Render eventreg result sets into vector figures.

This package reads only the persisted formats (trajectory CSV, event CSV,
metrics/manifest JSON); it does not import the simulation library.
"""

from .resultset import ResultFiles, RenderError, read_events, read_metrics, read_trajectory
from .render import FIGURES, FigureJob, render

__all__ = [
    "FIGURES", "FigureJob", "RenderError", "ResultFiles",
    "read_events", "read_metrics", "read_trajectory", "render",
]
