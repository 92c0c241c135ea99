"""Network catalog entries: pulse-coupled synchronization and the
event-regulated pendulum driven by a bursting half-center oscillator."""

from __future__ import annotations

import numpy as np

from .base import ConfigError, Experiment, register
from .. import _kernels
from ..events import EventTrain, match_trains, phase_offset, MetricError
from ..if_network import IFNetwork, natural_period, simulate_if
from ..integrate import TimeGrid
from ..models import HCONeuronParams, get_preset, hco_initial_state, hco_network_preset


# --- pulse-coupled integrate-and-fire synchronization --------------------------

def _if_sync_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 0.0, "dt": 0.0},  # horizon set in natural periods
        "n_units": 10,
        "drive": 1.0,
        "leak": 0.5,
        "eps": 0.05,
        "n_seeds": 100,
        "horizon_periods": 60.0,
        "sync_deadline_periods": 50.0,
    }


def _if_sync_trial(cfg, trial: int):
    n = cfg["n_units"]
    T = natural_period(cfg["drive"], cfg["leak"])
    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg["seed"],
                                                       spawn_key=(trial,)))
    x0 = rng.uniform(0.0, 1.0, n)
    net = IFNetwork(S=(cfg["drive"],) * n, gamma=(cfg["leak"],) * n,
                    eps=cfg["eps"], x=tuple(x0))
    _, log = simulate_if(net, t_end=cfg["horizon_periods"] * T, dt=T / 2.0)
    for t, members in log:
        if len(members) == n:
            return t / T, log
    return np.inf, log


def _run_if_sync(cfg, rng):
    deadline = cfg["sync_deadline_periods"]
    times = []
    sample_log = None
    for trial in range(cfg["n_seeds"]):
        t_sync, log = _if_sync_trial(cfg, trial)
        times.append(t_sync)
        if sample_log is None:
            sample_log = log
    times = np.array(times)
    synced = np.isfinite(times) & (times <= deadline)

    # ability check with eps = 0: no avalanche ever recruits every unit
    zero_cfg = dict(cfg)
    zero_cfg["eps"] = 0.0
    zero_sync = 0
    for trial in range(min(cfg["n_seeds"], 20)):
        t_sync, _ = _if_sync_trial(zero_cfg, trial)
        if np.isfinite(t_sync):
            zero_sync += 1

    finite = times[np.isfinite(times)]
    metrics = {
        "synced_fraction": float(np.mean(synced)),
        "synced_count": float(np.sum(synced)),
        "n_seeds": float(cfg["n_seeds"]),
        "median_sync_periods": float(np.median(finite)) if finite.size else float("inf"),
        "max_sync_periods": float(np.max(finite)) if finite.size else float("inf"),
        "eps_zero_synced_count": float(zero_sync),
    }

    # raster of the first trial's avalanches, one train per unit
    trains = []
    for unit in range(cfg["n_units"]):
        ts = [t for t, members in sample_log if unit in members]
        trains.append(EventTrain(0, f"unit_{unit}", tuple(ts)))
    return {}, trains, metrics


register(Experiment(
    id="if-sync",
    description="Pulse-coupled integrate-and-fire units reach synchronous firing in finite time",
    defaults=_if_sync_defaults,
    run=_run_if_sync,
))


# --- bursting network patterns and the event-regulated pendulum ----------------

def _hco_arrays(cfg):
    try:
        preset = get_preset(cfg.get("hco_preset", "paper-hco"))
    except KeyError as err:
        raise ConfigError(str(err)) from None
    if not isinstance(preset, HCONeuronParams):
        raise ConfigError(f"preset {cfg.get('hco_preset')!r} is not a bursting-neuron parameter set")
    base = preset.rescaled(cfg["time_scale"])
    taus = np.array([[base.tau_f] * 4, [base.tau_s] * 4, [base.tau_us] * 4])
    gains = np.array([[base.g_f_minus, base.g_s_plus, base.g_s_minus, base.g_us_plus]] * 4)
    gains[2, 0] = cfg["motor_neuron_3_g_f"]  # weaker fast conductance, lower spike peaks
    return taus, np.ascontiguousarray(gains)


def _event_pendulum_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 800.0, "dt": 1e-3},
        "hco_preset": "paper-hco",
        "time_scale": 0.02,            # half-center oscillator in rescaled time units
        "motor_neuron_3_g_f": 1.7,
        "switch_time": 400.0,
        "pendulum": {"a": 0.034, "c": 0.1},
        "motor": {"gain": 1.5, "threshold": 2.8},
        "phase_controller": {"amplitude": 0.3, "width": 1.0, "gain": 0.5},
        "events": {"onset_threshold": -0.5, "onset_refractory": 4.0,
                   "theta_threshold": 0.0, "theta_refractory": 3.0},
        "metrics": {"settle_fraction": 0.3, "lock_window": 8.0},
        "output": {"stride": 100},
    }


def _run_hco_pendulum_kernel(cfg, motor_on: bool):
    grid = _grid_of(cfg)
    taus, gains = _hco_arrays(cfg)
    G_first = hco_network_preset("inhibitory").gain_matrix
    G_second = hco_network_preset("excitatory").gain_matrix
    switch_step = grid.index_of(cfg["switch_time"])
    pend = np.array([cfg["pendulum"]["a"], cfg["pendulum"]["c"]])
    motor = np.array([cfg["motor"]["gain"] if motor_on else 0.0,
                      cfg["motor"]["threshold"]])
    pc = cfg["phase_controller"]
    ctrl = np.array([pc["amplitude"] if motor_on else 0.0, pc["width"], pc["gain"]])
    ev = cfg["events"]

    x0 = np.zeros(14)
    x0[:12] = hco_initial_state("inhibitory").reshape(-1)
    rec, theta_ev, onsets1, onsets3, pulses, *_ = _kernels.hco_pendulum(
        x0, grid.dt, grid.n_steps, switch_step, G_first, G_second, taus, gains,
        pend, motor, ctrl, ev["onset_threshold"], ev["onset_refractory"],
        ev["theta_threshold"], ev["theta_refractory"], cfg["output"]["stride"],
        max_events=64 + int(4 * grid.t_end))
    return grid, rec, theta_ev, onsets1, onsets3, pulses


def _grid_of(cfg) -> TimeGrid:
    g = cfg["grid"]
    return TimeGrid(g["t0"], g["t_end"], g["dt"])


def _phase_or_nan(a: EventTrain, b: EventTrain):
    try:
        return phase_offset(a, b), 0.0
    except MetricError:
        return float("nan"), 1.0


def _run_event_pendulum(cfg, rng):
    grid, rec, theta_ev, on1, on3, pulses = _run_hco_pendulum_kernel(cfg, motor_on=True)
    t_switch = cfg["switch_time"]
    settle = cfg["metrics"]["settle_fraction"]
    t_rec = grid.t0 + np.arange(rec.shape[0]) * grid.dt * cfg["output"]["stride"]
    theta = rec[:, 12]

    pre_mask = (t_rec >= grid.t0 + settle * (t_switch - grid.t0)) & (t_rec < t_switch)
    post_mask = t_rec >= t_switch + settle * (grid.t_end - t_switch)
    peak_pre = float(np.max(np.abs(theta[pre_mask])))
    peak_post = float(np.max(np.abs(theta[post_mask])))

    def within(arr, lo, hi):
        arr = np.asarray(arr)
        return arr[(arr >= lo) & (arr <= hi)]

    pre_lo = grid.t0 + settle * (t_switch - grid.t0)
    post_lo = t_switch + settle * (grid.t_end - t_switch)
    t_theta = EventTrain(0, "theta", tuple(within(theta_ev, pre_lo, t_switch)))
    t_on1_pre = EventTrain(0, "burst_1", tuple(within(on1, pre_lo, t_switch)))
    lock = match_trains(t_on1_pre, t_theta, cfg["metrics"]["lock_window"])

    on1_pre = EventTrain(0, "b1", tuple(within(on1, pre_lo, t_switch)))
    on3_pre = EventTrain(0, "b3", tuple(within(on3, pre_lo, t_switch)))
    on1_post = EventTrain(0, "b1", tuple(within(on1, post_lo, grid.t_end)))
    on3_post = EventTrain(0, "b3", tuple(within(on3, post_lo, grid.t_end)))
    off_pre, aper_pre = _phase_or_nan(on1_pre, on3_pre)
    off_post, aper_post = _phase_or_nan(on1_post, on3_post)

    metrics = {
        "peak_theta_pre_switch": peak_pre,
        "peak_theta_post_switch": peak_post,
        "peak_ratio": peak_post / peak_pre if peak_pre > 0 else float("inf"),
        "lock_matched_fraction": lock.matched_fraction,
        "pre_switch_burst_offset": off_pre,
        "pre_switch_aperiodic": aper_pre,
        "post_switch_burst_offset": off_post,
        "post_switch_aperiodic": aper_post,
        "n_theta_events": float(len(theta_ev)),
        "n_pulses": float(len(pulses)),
    }

    trains = [
        EventTrain(0, "theta_events", tuple(theta_ev)),
        EventTrain(0, "burst_onsets_1", tuple(on1)),
        EventTrain(0, "burst_onsets_3", tuple(on3)),
    ]
    cols = {
        "theta": theta, "omega": rec[:, 13],
        "v_1": rec[:, 0], "v_3": rec[:, 6],
        "v_s_1": rec[:, 1], "v_s_3": rec[:, 7],
    }
    return {"closed_loop": (t_rec, cols)}, trains, metrics


register(Experiment(
    id="event-pendulum",
    description="Half-center oscillator drives a pendulum; gain switch flips anti-phase to in-phase",
    defaults=_event_pendulum_defaults,
    run=_run_event_pendulum,
))


# --- standalone burst-pattern measurement (shared with the acceptance suite) ----

def hco_pattern_metrics(mode: str, g_us_scale: float = 1.0, t_end: float = 30000.0,
                        dt: float = 0.01, onset_threshold: float = -0.5,
                        onset_refractory: float = 200.0, settle_fraction: float = 0.4):
    """Burst-train phase offset between the two motor neurons and the burst period.

    Runs the named network preset from its documented initial state with the
    pendulum and phase controller disconnected.
    """
    neuron = HCONeuronParams()
    if g_us_scale != 1.0:
        from dataclasses import replace
        neuron = replace(neuron, g_us_plus=neuron.g_us_plus * g_us_scale)
    taus = np.array([[neuron.tau_f] * 4, [neuron.tau_s] * 4, [neuron.tau_us] * 4])
    gains = np.array([[neuron.g_f_minus, neuron.g_s_plus,
                       neuron.g_s_minus, neuron.g_us_plus]] * 4)
    G = hco_network_preset("inhibitory" if mode == "inhibitory" else "excitatory",
                           neurons=(neuron,) * 4).gain_matrix

    grid = TimeGrid(0.0, t_end, dt)
    x0 = np.zeros(14)
    x0[:12] = hco_initial_state(mode).reshape(-1)
    rec, theta_ev, on1, on3, pulses, *_ = _kernels.hco_pendulum(
        x0, grid.dt, grid.n_steps, grid.n_steps + 1, G, G, taus,
        np.ascontiguousarray(gains),
        np.array([1.0, 1.0]), np.array([0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
        onset_threshold, onset_refractory, 0.0, 1.0, 1000,
        max_events=64 + int(t_end / onset_refractory) * 4)
    lo = settle_fraction * t_end
    o1 = np.asarray(on1)
    o3 = np.asarray(on3)
    a = EventTrain(0, "b1", tuple(o1[o1 >= lo]))
    b = EventTrain(0, "b3", tuple(o3[o3 >= lo]))
    offset = phase_offset(a, b)
    period = float(np.mean(np.diff(b.asarray())))
    return {"offset": offset, "period": period,
            "n_bursts_1": len(a), "n_bursts_3": len(b)}
