"""Vector fields and parameter records for the simulated physical systems.

Pendulum, FitzHugh-Nagumo neuron, conductance synapse, and the
three-timescale bursting neuron used in the half-center oscillator.
All dynamics are pure functions and broadcast over numpy arrays, so a
batch of trials can share one call.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import expit

__all__ = [
    "PendulumParams", "PendulumState", "pendulum_dynamics",
    "FNParams", "FNState", "fn_dynamics", "fn_rest_state",
    "SynapseParams", "synaptic_sigmoid", "synapse_activation_dynamics", "synapse_current",
    "HCONeuronParams", "HCONetwork", "hco_neuron_dynamics", "hco_synaptic_current",
    "hco_network_dynamics", "hco_network_preset", "hco_initial_state",
    "get_preset", "PRESETS", "HCO_INITIAL_LEVELS",
]


# --- pendulum ---------------------------------------------------------------

@dataclass(frozen=True)
class PendulumParams:
    """theta'' = -a sin(theta) - c theta' + u; the controlled plant uses a = 1."""

    a: float = 1.0
    c: float = 0.5

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise ValueError("PendulumParams needs a > 0 and c > 0")


@dataclass(frozen=True)
class PendulumState:
    theta: float
    omega: float


def _pair(s, names):
    if hasattr(s, names[0]):
        return tuple(getattr(s, n) for n in names)
    return tuple(s)


def pendulum_dynamics(s, u, p: PendulumParams):
    """Derivative (theta', omega') of the damped driven pendulum."""
    theta, omega = _pair(s, ("theta", "omega"))
    return np.array([omega, -p.a * np.sin(theta) - p.c * omega + u])


# --- FitzHugh-Nagumo neuron -------------------------------------------------

@dataclass(frozen=True)
class FNParams:
    """Excitable circuit; L/C sets the voltage-to-recovery timescale ratio.

    The default recovery rate 1/L = 0.08 gives the classic spiking
    phenotype: rest near v = -1.2, spikes peaking near v = 2, limit cycle
    for drives roughly in (0.33, 1.42).
    """

    C: float = 1.0
    L: float = 12.5
    a: float = 0.7
    b: float = 0.8

    def __post_init__(self):
        if not (self.C > 0 and self.L > 0 and self.b >= 0):
            raise ValueError("FNParams needs C > 0, L > 0, b >= 0")


@dataclass(frozen=True)
class FNState:
    v: float
    i_L: float


def fn_dynamics(s, I, u, d, p: FNParams):
    """FitzHugh-Nagumo derivative.

    The applied current u and the synaptic disturbance d are summed first,
    so an exact compensation u = -d cancels bitwise in the voltage equation.
    """
    v, i_L = _pair(s, ("v", "i_L"))
    dv = (v - v ** 3 / 3.0 - i_L + I + (u + d)) / p.C
    di = (-p.b * i_L + v + p.a) / p.L
    return np.array([dv, di])


def fn_rest_state(p: FNParams, I: float = 0.0) -> FNState:
    """Resting equilibrium: the real root of v - v^3/3 - (v + a)/b + I = 0."""
    from scipy.optimize import brentq

    if p.b == 0:
        raise ValueError("rest state needs b > 0")

    def g(v):
        return v - v ** 3 / 3.0 - (v + p.a) / p.b + I

    v0 = brentq(g, -10.0, 10.0, xtol=1e-14)
    return FNState(v=v0, i_L=(v0 + p.a) / p.b)


# --- conductance synapse ----------------------------------------------------

@dataclass(frozen=True)
class SynapseParams:
    """First-order activation z driven by a sigmoid of the presynaptic voltage.

    The emitted current is g * z * (v - E_syn), entering the postsynaptic
    voltage equation with a plus sign: E_syn below the neuron's voltage
    range makes the synapse depolarizing (excitatory), above makes it
    hyperpolarizing.
    """

    tau: float = 1.0
    g: float = 1.0
    E_syn: float = -2.0
    h_gain: float = 2.0
    h_center: float = -1.0

    def __post_init__(self):
        if not (self.tau > 0 and self.g >= 0):
            raise ValueError("SynapseParams needs tau > 0 and g >= 0")


def synaptic_sigmoid(w, p: SynapseParams):
    return expit(p.h_gain * (np.asarray(w, dtype=float) - p.h_center))


def synapse_activation_dynamics(z, w, p: SynapseParams):
    """z' = (-z + h(w)) / tau."""
    return (-z + synaptic_sigmoid(w, p)) / p.tau


def synapse_current(z, v, p: SynapseParams):
    """d = g z (v - E_syn)."""
    return p.g * z * (v - p.E_syn)


# --- three-timescale bursting neuron (half-center oscillator unit) ----------

@dataclass(frozen=True)
class HCONeuronParams:
    """Fast/slow/ultraslow neuron with localized tanh conductances.

    tau_f v' = -v + g_f_minus tanh(v) - g_s_plus tanh(v_s)
               + g_s_minus tanh(v_s + 0.9) - g_us_plus tanh(v_us + 0.9)
               + I_syn + i_p
    tau_s v_s'  = v - v_s
    tau_us v_us' = v - v_us

    Increasing g_us_plus shortens the burst period (stronger ultraslow
    restoration turns the cycle around earlier); see the acceptance test
    on burst-period monotonicity.
    """

    tau_f: float = 1.0
    tau_s: float = 50.0
    tau_us: float = 2500.0
    g_f_minus: float = 2.0
    g_s_plus: float = 2.0
    g_s_minus: float = 1.5
    g_us_plus: float = 2.0

    def __post_init__(self):
        if not (0 < self.tau_f < self.tau_s < self.tau_us):
            raise ValueError("need 0 < tau_f < tau_s < tau_us")
        if min(self.g_f_minus, self.g_s_plus, self.g_s_minus, self.g_us_plus) < 0:
            raise ValueError("conductances must be >= 0")

    def rescaled(self, factor: float) -> "HCONeuronParams":
        """Same circuit in rescaled time units (all time constants * factor)."""
        return replace(self, tau_f=self.tau_f * factor, tau_s=self.tau_s * factor,
                       tau_us=self.tau_us * factor)


def hco_neuron_dynamics(s, I_syn, i_p, p: HCONeuronParams):
    v, v_s, v_us = _pair(s, ("v", "v_s", "v_us"))
    dv = (-v + p.g_f_minus * np.tanh(v)
          - p.g_s_plus * np.tanh(v_s)
          + p.g_s_minus * np.tanh(v_s + 0.9)
          - p.g_us_plus * np.tanh(v_us + 0.9)
          + I_syn + i_p) / p.tau_f
    dv_s = (v - v_s) / p.tau_s
    dv_us = (v - v_us) / p.tau_us
    return np.array([dv, dv_s, dv_us])


def hco_synaptic_current(v_s_j, g_syn_ij):
    """Synaptic current into i from j; the sign of g_syn_ij makes it excitatory or inhibitory."""
    return g_syn_ij * expit(2.0 * (np.asarray(v_s_j, dtype=float) + 1.0))


@dataclass(frozen=True)
class HCONetwork:
    """Four bursting neurons coupled through slow-voltage synapses g_syn[i, j] (zero diagonal)."""

    neurons: tuple
    g_syn: tuple  # 4x4 nested tuple, row i = gains into neuron i

    def __post_init__(self):
        if len(self.neurons) != 4:
            raise ValueError("HCONetwork is a 4-neuron circuit")
        g = np.asarray(self.g_syn, dtype=float)
        if g.shape != (4, 4):
            raise ValueError("g_syn must be 4x4")
        if np.any(np.diag(g) != 0.0):
            raise ValueError("g_syn diagonal must be exactly 0")

    @property
    def gain_matrix(self) -> np.ndarray:
        return np.asarray(self.g_syn, dtype=float)


def hco_network_dynamics(state: np.ndarray, i_p, net: HCONetwork) -> np.ndarray:
    """Derivative of the (4, 3) network state [v, v_s, v_us] per neuron."""
    state = np.asarray(state, dtype=float).reshape(4, 3)
    i_p = np.broadcast_to(np.asarray(i_p, dtype=float), (4,))
    act = expit(2.0 * (state[:, 1] + 1.0))
    I_syn = net.gain_matrix @ act
    out = np.empty((4, 3))
    for i, p in enumerate(net.neurons):
        out[i] = hco_neuron_dynamics(state[i], I_syn[i], i_p[i], p)
    return out


# --- named presets ----------------------------------------------------------

def _hco_ring(neurons, g_within: float, g_cross: float) -> HCONetwork:
    """Two pairs (1,2) and (3,4) plus cross links 1-3 and 2-4.

    The motor neurons are 1 and 3. Reciprocal cross inhibition makes them
    burst in alternation; flipping the cross links excitatory (with mild
    within-pair inhibition to keep the rhythm regular) synchronizes them.
    """
    g = np.zeros((4, 4))
    g[0, 1] = g[1, 0] = g_within
    g[2, 3] = g[3, 2] = g_within
    g[0, 2] = g[2, 0] = g_cross
    g[1, 3] = g[3, 1] = g_cross
    return HCONetwork(neurons=tuple(neurons), g_syn=tuple(map(tuple, g)))


PRESETS = {
    "fn-classic": FNParams(),
    "paper-hco": HCONeuronParams(),
    "synapse-excitatory": SynapseParams(tau=1.0, g=1.0, E_syn=-2.0),
    "synapse-inhibitory": SynapseParams(tau=1.0, g=1.0, E_syn=3.0),
}

# per-neuron initial slow/fast voltages selecting the intended network attractor
HCO_INITIAL_LEVELS = {
    "inhibitory": (-0.55, -1.80, -1.72, -0.65),
    "excitatory": (-1.8, -1.0, -1.4, -0.6),
}


def get_preset(name: str):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def hco_network_preset(mode: str, neurons=None, time_scale: float = 1.0) -> HCONetwork:
    """Network presets: mode 'inhibitory' (v1/v3 anti-phase) or 'excitatory' (in-phase).

    ``time_scale`` rescales every neuron's time constants; the gain pattern
    is unchanged.
    """
    if neurons is None:
        base = PRESETS["paper-hco"].rescaled(time_scale)
        neurons = (base,) * 4
    if mode == "inhibitory":
        return _hco_ring(neurons, 0.0, -1.0)
    if mode == "excitatory":
        return _hco_ring(neurons, -0.5, 0.5)
    raise ValueError("mode must be 'inhibitory' or 'excitatory'")


def hco_initial_state(mode: str) -> np.ndarray:
    """(4, 3) initial state with v = v_s = v_us at the documented per-neuron levels."""
    levels = HCO_INITIAL_LEVELS[mode]
    return np.repeat(np.asarray(levels, dtype=float)[:, None], 3, axis=1)
