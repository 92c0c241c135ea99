"""Declarative experiment catalog and runner."""

from .base import (
    CATALOG, ConfigError, Experiment, ExperimentError, ExperimentSpec, ResultSet,
    apply_override, register, reproduce_from_manifest, resolve_config, run_experiment,
)
from . import neuron, pendulum, network  # noqa: F401  (catalog registration)
from .network import hco_pattern_metrics

FIGURE_IDS = {
    "fig1": "reliability",
    "fig3": "pendulum-tracking",
    "fig5": "fn-rejection-dc",
    "fig6": "fn-rejection-noise",
    "fig7": "pendulum-entrainment",
    "fig8": "coupling-comparison",
    "fig10": "event-rejection",
    "fig12": "event-pendulum",
    "ifsync": "if-sync",
}

__all__ = [
    "CATALOG", "ConfigError", "Experiment", "ExperimentError", "ExperimentSpec",
    "ResultSet", "FIGURE_IDS", "apply_override", "register", "reproduce_from_manifest",
    "resolve_config", "run_experiment", "hco_pattern_metrics",
]
