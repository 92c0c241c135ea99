"""Simulation library for trajectory regulation versus event regulation.

The package couples deterministic fixed-step ODE integration with event
extraction and event-level metrics, and ships a catalog of seeded
experiments on pendula, FitzHugh-Nagumo circuits, conductance synapses,
bursting half-center oscillators, and pulse-coupled integrate-and-fire
networks.
"""

__version__ = "0.1.0"

from .signals import SignalSpec, constant, sinusoid, pulse_train, frozen_noise, piecewise, eval_signal
from .integrate import TimeGrid, ResetSchedule, Trajectory, IntegrationError, rk4_step, integrate, halving_error
from .events import EventTrain, MatchReport, MetricError, detect_events, match_trains, reliability, phase_offset, spurious_count

__all__ = [
    "__version__",
    "SignalSpec", "constant", "sinusoid", "pulse_train", "frozen_noise", "piecewise", "eval_signal",
    "TimeGrid", "ResetSchedule", "Trajectory", "IntegrationError", "rk4_step", "integrate", "halving_error",
    "EventTrain", "MatchReport", "MetricError", "detect_events", "match_trains", "reliability",
    "phase_offset", "spurious_count",
]
