"""Control laws: pendulum tracking, synaptic disturbance compensation,
coupling rules, and the event-phase controller for the bursting oscillator.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .events import EventTrain, wrap_phase
from .models import PendulumParams, SynapseParams, synapse_activation_dynamics, synapse_current

__all__ = [
    "TrackingGains", "MismatchSpec", "PhaseControllerConfig",
    "tracking_control", "internal_model_torque",
    "disturbance_observer_step", "disturbance_compensation", "uncertain_synapse",
    "diffusive_coupling", "velocity_coupling", "synaptic_coupling_current",
    "phase_controller_step", "hco_motor_map",
]


@dataclass(frozen=True)
class TrackingGains:
    """Position/velocity error gains; stability needs k1 > 1 and k2 > -c."""

    k1: float
    k2: float

    def __post_init__(self):
        if not self.k1 > 1.0:
            raise ValueError("k1 must be > 1")


def tracking_control(e, edot, theta_r, thetadot_r, u_r,
                     plant: PendulumParams, ref: PendulumParams,
                     gains: TrackingGains):
    """Feedforward-plus-feedback torque for tracking a reference pendulum.

    The same expression serves the internal-model variant by passing the
    estimated reference state and estimated error in place of the true ones.
    """
    if not gains.k2 > -plant.c:
        raise ValueError("k2 must exceed -c of the plant")
    return (u_r - (ref.a - 1.0) * np.sin(theta_r) - (ref.c - plant.c) * thetadot_r
            - gains.k1 * e - gains.k2 * edot)


def internal_model_torque(u_r, theta_hat_r, thetadot_hat_r, theta, thetadot,
                          e_meas, edot_meas, k_o: float = 0.0, k_d: float = 0.0):
    """Torque driving the internal reference copy; u_r plus error-feedback injection.

    The measured regulation error reveals the exosystem state
    (theta_r = theta - e), and the injection pulls the internal estimate
    onto it, which enforces contraction of the estimate even where the
    reference pendulum itself is not contractive. k_o = k_d = 0 leaves the
    plain copy.
    """
    theta_r = theta - e_meas
    thetadot_r = thetadot - edot_meas
    return u_r - k_o * (theta_hat_r - theta_r) - k_d * (thetadot_hat_r - thetadot_r)


# --- synaptic disturbance observer -------------------------------------------

def disturbance_observer_step(z_hat, w, p: SynapseParams):
    """Observer copy of the synapse activation: z_hat' = (-z_hat + h(w)) / tau."""
    return synapse_activation_dynamics(z_hat, w, p)


def disturbance_compensation(z_hat, v, p: SynapseParams):
    """u = -g z_hat (v - E_syn), the estimated disturbance with its sign flipped."""
    return -synapse_current(z_hat, v, p)


@dataclass(frozen=True)
class MismatchSpec:
    """Fractional mismatch applied to (g, E_syn, tau) of a nominal synapse."""

    delta: float

    def __post_init__(self):
        if not self.delta > -1.0:
            raise ValueError("delta must be > -1")


def uncertain_synapse(nominal: SynapseParams, m: MismatchSpec) -> SynapseParams:
    """Parameters scaled by (1 + delta) componentwise: g, E_syn, tau."""
    tau_in = nominal.tau * (1.0 + m.delta)
    if tau_in <= 0:
        raise ValueError("mismatched tau must stay positive")
    return replace(nominal, g=nominal.g * (1.0 + m.delta),
                   E_syn=nominal.E_syn * (1.0 + m.delta), tau=tau_in)


# --- coupling rules -----------------------------------------------------------

def diffusive_coupling(y1, y2, k1, k2):
    """Proportional feedback on the output difference; k2 = 0 is master-slave."""
    e = y1 - y2
    return -k1 * e, -k2 * e


def velocity_coupling(omega_i, omega_j, k):
    """Additional torque k (omega_j - omega_i) on pendulum i."""
    return k * (omega_j - omega_i)


def synaptic_coupling_current(z, y_post, p: SynapseParams):
    """Unidirectional conductance-gated current into the postsynaptic system."""
    return synapse_current(z, y_post, p)


# --- event-phase controller and motor map ------------------------------------

@dataclass(frozen=True)
class PhaseControllerConfig:
    amplitude: float = 1.0       # pulse amplitude scale
    width: float = 1.0           # pulse width
    onset_threshold: float = 0.0  # burst-onset detection threshold on the slow voltage
    gain: float = 1.0            # gain on the normalized phase error

    def __post_init__(self):
        if self.amplitude < 0 or not self.width > 0:
            raise ValueError("need amplitude >= 0 and width > 0")


def phase_controller_step(measured_events: EventTrain, internal_burst_onsets: EventTrain,
                          cfg: PhaseControllerConfig, t: float) -> float:
    """Pulse current at time t from the latest measured event's phase error.

    On each measured event the normalized error
    (t_meas - last onset) / mean onset period, wrapped to (-1/2, 1/2],
    sets the amplitude of a rectangular pulse of the configured width.
    With fewer than 2 internal onsets the period is undefined and the
    output is 0.
    """
    meas = measured_events.asarray()
    meas = meas[meas <= t]
    if meas.size == 0:
        return 0.0
    t_meas = float(meas[-1])
    if t - t_meas >= cfg.width:
        return 0.0
    onsets = internal_burst_onsets.asarray()
    onsets = onsets[onsets <= t_meas]
    if onsets.size < 2:
        return 0.0
    T = float(np.mean(np.diff(onsets)))
    dphi = float(wrap_phase((t_meas - onsets[-1]) / T))
    return cfg.amplitude * cfg.gain * dphi


def hco_motor_map(v_1, v_3, g_m: float, v_th: float):
    """Antagonistic rectified motor torques: u = g_m (max(v1 - v_th, 0) - max(v3 - v_th, 0))."""
    return g_m * (np.maximum(v_1 - v_th, 0.0) - np.maximum(v_3 - v_th, 0.0))
