"""Catalog entries built on the FitzHugh-Nagumo circuit kernels.

Covers the reliability protocol pair, synaptic disturbance rejection with
constant and noisy drive, the diffusive-versus-synaptic coupling
comparison, and the uncertain-internal-model event rejection sweep.
"""

from __future__ import annotations

import numpy as np

from .base import ConfigError, Experiment, register, subsample
from .. import _kernels
from ..events import EventTrain, detect_events, match_trains, phase_offset, reliability
from ..integrate import TimeGrid, Trajectory
from ..models import FNParams, fn_rest_state, get_preset
from ..signals import SignalSpec, eval_signal, frozen_noise, pulse_train

SPIKE_THRESHOLD = 1.0
SPIKE_REFRACTORY = 5.0


def _fn_preset(cfg) -> FNParams:
    name = cfg.get("neuron_preset", "fn-classic")
    try:
        preset = get_preset(name)
    except KeyError as err:
        raise ConfigError(str(err)) from None
    if not isinstance(preset, FNParams):
        raise ConfigError(f"preset {name!r} is not a FitzHugh-Nagumo parameter set")
    return preset


def _grid(cfg) -> TimeGrid:
    g = cfg["grid"]
    return TimeGrid(g["t0"], g["t_end"], g["dt"])


def _half_times(grid: TimeGrid) -> np.ndarray:
    return grid.t0 + np.arange(2 * grid.n_steps + 1) * (grid.dt / 2.0)


def _held_values(spec: SignalSpec, hold: float, t_end: float) -> np.ndarray:
    n_iv = int(np.ceil(t_end / hold)) + 1
    return eval_signal(spec, (np.arange(n_iv) + 0.5) * hold)


def _spike_train(grid: TimeGrid, v: np.ndarray, trial_id: int, label: str) -> EventTrain:
    traj = Trajectory(grid, {"v": v})
    return detect_events(traj, "v", SPIKE_THRESHOLD, "up",
                         refractory=SPIKE_REFRACTORY, trial_id=trial_id, label=label)


# --- reliability -------------------------------------------------------------

def _reliability_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 600.0, "dt": 1e-3},
        "neuron_preset": "fn-classic",
        "n_trials": 25,
        "step_level": 0.5,             # protocol A drive
        "noise": {"mean": 0.0, "std": 2.0, "hold": 2.0, "seed": 1013},  # protocol B frozen noise
        "trial_noise": {"std_fraction": 0.05, "hold": 0.5},
        "init_box": {"v": 0.6, "i_L": 0.3},
        "metrics": {"burn_in": 60.0, "window": 1.0},
        "output": {"stride": 50, "trials_saved": 10},
    }


def _reliability_trials(cfg, base_vals, base_hold, rng, seeds):
    grid = _grid(cfg)
    fn = _fn_preset(cfg)
    rest = fn_rest_state(fn)
    n_trials = cfg["n_trials"]
    box = cfg["init_box"]
    tn = cfg["trial_noise"]
    tn_std = tn["std_fraction"] * cfg["noise"]["std"]
    v0 = rest.v + rng.uniform(-box["v"], box["v"], n_trials)
    w0 = rest.i_L + rng.uniform(-box["i_L"], box["i_L"], n_trials)
    n_iv = int(np.ceil(grid.t_end / tn["hold"])) + 1
    mid = (np.arange(n_iv) + 0.5) * tn["hold"]
    noise = np.empty((n_iv, n_trials))
    for j in range(n_trials):
        noise[:, j] = eval_signal(frozen_noise(0.0, tn_std, tn["hold"], int(seeds[j])), mid)
    v = _kernels.fn_batch(v0, w0, grid.dt, grid.n_steps, base_vals, base_hold,
                          noise, tn["hold"], fn.C, fn.L, fn.a, fn.b)
    return v


def _run_reliability(cfg, rng):
    grid = _grid(cfg)
    ss = np.random.SeedSequence(cfg["seed"])
    children = ss.generate_state(2 * cfg["n_trials"])
    seeds_a = children[:cfg["n_trials"]]
    seeds_b = children[cfg["n_trials"]:]

    rng_a = np.random.default_rng(np.random.SeedSequence(entropy=cfg["seed"], spawn_key=(0,)))
    rng_b = np.random.default_rng(np.random.SeedSequence(entropy=cfg["seed"], spawn_key=(1,)))

    noise_cfg = cfg["noise"]
    base_b = _held_values(frozen_noise(noise_cfg["mean"], noise_cfg["std"],
                                       noise_cfg["hold"], noise_cfg["seed"]),
                          noise_cfg["hold"], grid.t_end)
    v_a = _reliability_trials(cfg, np.array([cfg["step_level"]]), 1e18, rng_a, seeds_a)
    v_b = _reliability_trials(cfg, base_b, noise_cfg["hold"], rng_b, seeds_b)

    trains_a = []
    trains_b = []
    for j in range(cfg["n_trials"]):
        ta = _spike_train(grid, v_a[:, j], j, "A")
        tb = _spike_train(grid, v_b[:, j], j, "B")
        trains_a.append(ta)
        trains_b.append(tb)
    trains = trains_a + trains_b

    m = cfg["metrics"]
    burned_b = [tr.within(m["burn_in"], grid.t_end) for tr in trains_b]
    frac_b, jitter_b = reliability(burned_b, m["window"])
    isis = np.concatenate([np.diff(tr.asarray()) for tr in burned_b if len(tr) > 1])
    mean_isi = float(np.mean(isis))

    # protocol A: limit-cycle period from trial 0's final inter-spike intervals,
    # pooled circular dispersion of all trials' spike phases in the final quarter
    isi_a0 = np.diff(trains_a[0].asarray())
    period = float(np.mean(isi_a0[-4:]))
    pool = np.concatenate([tr.within(0.75 * grid.t_end, grid.t_end).asarray()
                           for tr in trains_a])
    phases = 2.0 * np.pi * np.mod(pool, period) / period
    resultant = np.abs(np.mean(np.exp(1j * phases)))
    dispersion = float(np.sqrt(-2.0 * np.log(max(resultant, 1e-12))) * period / (2 * np.pi))

    metrics = {
        "protocol_b_matched_fraction": frac_b,
        "protocol_b_jitter": jitter_b,
        "protocol_b_mean_isi": mean_isi,
        "protocol_b_jitter_over_isi": jitter_b / mean_isi,
        "protocol_a_period": period,
        "protocol_a_dispersion": dispersion,
        "protocol_a_dispersion_over_period": dispersion / period,
    }

    stride = cfg["output"]["stride"]
    saved = cfg["output"]["trials_saved"]
    t_out, cols_a = subsample(grid.times(), {f"v{j}": v_a[:, j] for j in range(saved)}, stride)
    _, cols_b = subsample(grid.times(), {f"v{j}": v_b[:, j] for j in range(saved)}, stride)
    trajectories = {
        "protocol_a": (t_out, cols_a),
        "protocol_b": (t_out, cols_b),
    }
    return trajectories, trains, metrics


register(Experiment(
    id="reliability",
    description="25 FitzHugh-Nagumo trials: constant step vs shared frozen noise",
    defaults=_reliability_defaults,
    run=_run_reliability,
))


# --- synaptic disturbance rejection circuit ----------------------------------

def _circuit_pars(cfg, delta: float = 0.0) -> np.ndarray:
    fn = _fn_preset(cfg)
    syn = cfg["synapse"]
    return np.array([
        fn.C, fn.L, fn.a, fn.b,
        fn.C, fn.L, fn.a, fn.b,
        syn["tau"], syn["g"], syn["E_syn"],
        syn["tau"] * (1.0 + delta), syn["g"] * (1.0 + delta), syn["E_syn"] * (1.0 + delta),
        syn["h_gain"], syn["h_center"],
    ])


def _run_circuit(cfg, Ip_spec, Ic_spec, g_d_on, g_in_on, z_hat0, delta=0.0):
    grid = _grid(cfg)
    th = _half_times(grid)
    Ip = eval_signal(Ip_spec, th)
    Ic = eval_signal(Ic_spec, th)
    pars = _circuit_pars(cfg, delta)
    if not g_d_on:
        pars[9] = 0.0
    if not g_in_on:
        pars[12] = 0.0
    rest = fn_rest_state(_fn_preset(cfg))
    x0 = np.array([rest.v, rest.i_L, 0.0, z_hat0, rest.v, rest.i_L])
    return _kernels.fn_circuit(x0, Ip, Ic, grid.dt, pars)


def _rejection_dc_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 600.0, "dt": 1e-3},
        "neuron_preset": "fn-classic",
        "drive_level": 0.5,
        "presyn_pulses": {"amplitude": 1.2, "width": 2.0, "period": 150.0, "start": 40.0},
        "synapse": {"tau": 3.0, "g": 2.0, "E_syn": -2.0, "h_gain": 4.0, "h_center": 0.0},
        "observer_z0": 1.0,
        "metrics": {"tail_fraction": 0.3333333333333333, "window": 2.0},
        "output": {"stride": 50},
    }


def _run_rejection_dc(cfg, rng):
    grid = _grid(cfg)
    p = cfg["presyn_pulses"]
    pulses = pulse_train(p["amplitude"], p["width"], p["period"], p["start"])
    drive = SignalSpec("constant", {"level": cfg["drive_level"]})

    base = _run_circuit(cfg, pulses, drive, False, False, 0.0)
    dist = _run_circuit(cfg, pulses, drive, True, False, 0.0)
    comp = _run_circuit(cfg, pulses, drive, True, True, cfg["observer_z0"])

    t_base = _spike_train(grid, base[:, 4], 0, "unperturbed")
    t_dist = _spike_train(grid, dist[:, 4], 0, "disturbed")
    t_comp = _spike_train(grid, comp[:, 4], 0, "compensated")
    t_pre = _spike_train(grid, base[:, 0], 0, "presynaptic")

    m = cfg["metrics"]
    tail_start = grid.t0 + m["tail_fraction"] * (grid.t_end - grid.t0)
    tail = lambda tr: tr.within(tail_start, grid.t_end)
    isi_base = np.diff(tail(t_base).asarray())
    isi_comp = np.diff(tail(t_comp).asarray())
    offset = phase_offset(tail(t_comp), tail(t_base))
    extra = match_trains(t_base, t_dist, m["window"]).extra_test

    metrics = {
        "residual_phase_offset": offset,
        "unperturbed_isi_rel_std": float(np.std(isi_base) / np.mean(isi_base)),
        "compensated_isi_rel_std": float(np.std(isi_comp) / np.mean(isi_comp)),
        "disturbed_extra_events": float(extra),
        "presyn_spikes": float(len(t_pre)),
    }

    stride = cfg["output"]["stride"]
    t_out, cols = subsample(grid.times(), {
        "v_unperturbed": base[:, 4],
        "v_disturbed": dist[:, 4],
        "v_compensated": comp[:, 4],
        "v_presynaptic": base[:, 0],
        "disturbance": cfg["synapse"]["g"] * dist[:, 2] * (dist[:, 4] - cfg["synapse"]["E_syn"]),
    }, stride)
    return {"voltages": (t_out, cols)}, [t_pre, t_base, t_dist, t_comp], metrics


register(Experiment(
    id="fn-rejection-dc",
    description="Synaptic disturbance rejection under constant drive: residual phase shift",
    defaults=_rejection_dc_defaults,
    run=_run_rejection_dc,
))


def _rejection_noise_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 600.0, "dt": 1e-3},
        "neuron_preset": "fn-classic",
        "drive_noise": {"mean": 0.0, "std": 2.0, "hold": 2.0, "seed": 555},
        "presyn_pulses": {"amplitude": 1.2, "width": 2.0, "period": 150.0, "start": 40.0},
        "synapse": {"tau": 3.0, "g": 2.0, "E_syn": -2.0, "h_gain": 4.0, "h_center": 0.0},
        "observer_z0": 1.0,
        "metrics": {"burn_in_fraction": 0.2, "window_steps": 5},
        "output": {"stride": 50},
    }


def _run_rejection_noise(cfg, rng):
    grid = _grid(cfg)
    p = cfg["presyn_pulses"]
    pulses = pulse_train(p["amplitude"], p["width"], p["period"], p["start"])
    nz = cfg["drive_noise"]
    drive = frozen_noise(nz["mean"], nz["std"], nz["hold"], nz["seed"])

    base = _run_circuit(cfg, pulses, drive, False, False, 0.0)
    dist = _run_circuit(cfg, pulses, drive, True, False, 0.0)
    comp = _run_circuit(cfg, pulses, drive, True, True, cfg["observer_z0"])

    t_base = _spike_train(grid, base[:, 4], 0, "unperturbed")
    t_dist = _spike_train(grid, dist[:, 4], 0, "disturbed")
    t_comp = _spike_train(grid, comp[:, 4], 0, "compensated")
    t_pre = _spike_train(grid, base[:, 0], 0, "presynaptic")

    m = cfg["metrics"]
    burn = grid.t0 + m["burn_in_fraction"] * (grid.t_end - grid.t0)
    window = m["window_steps"] * grid.dt
    rep = match_trains(t_base.within(burn, grid.t_end), t_comp.within(burn, grid.t_end),
                       window)
    k_burn = grid.index_of(burn)
    metrics = {
        "matched_fraction": rep.matched_fraction,
        "extra_events": float(rep.extra_test),
        "match_window": window,
        "max_tail_voltage_gap": float(np.max(np.abs(base[k_burn:, 4] - comp[k_burn:, 4]))),
        "disturbed_extra_events": float(match_trains(t_base, t_dist, 2.0).extra_test),
    }

    stride = cfg["output"]["stride"]
    t_out, cols = subsample(grid.times(), {
        "v_unperturbed": base[:, 4],
        "v_disturbed": dist[:, 4],
        "v_compensated": comp[:, 4],
        "v_presynaptic": base[:, 0],
    }, stride)
    return {"voltages": (t_out, cols)}, [t_pre, t_base, t_dist, t_comp], metrics


register(Experiment(
    id="fn-rejection-noise",
    description="Synaptic disturbance rejection under frozen noise: exact event recovery",
    defaults=_rejection_noise_defaults,
    run=_run_rejection_noise,
))


# --- diffusive vs synaptic coupling comparison --------------------------------

def _coupling_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 600.0, "dt": 1e-3},
        "neuron_preset": "fn-classic",
        "neuron_2": {"C": 1.3, "L": 12.5, "a": 0.84, "b": 0.8},
        "drive": {"amplitude": 0.8, "width": 1.5, "period": 40.0, "start": 10.0},
        "synaptic_gain": 0.6,
        "synapse": {"tau": 0.5, "E_syn": -2.0, "h_gain": 4.0, "h_center": 0.0},
        "diffusive_gains": [0.1, 0.2, 0.4, 0.8, 1.6, 3.2],
        "metrics": {"window": 2.0, "burn_in_fraction": 0.2},
        "output": {"stride": 50},
    }


def _run_coupling(cfg, rng):
    grid = _grid(cfg)
    d = cfg["drive"]
    drive = pulse_train(d["amplitude"], d["width"], d["period"], d["start"])
    I = eval_signal(drive, _half_times(grid))
    p1 = _fn_preset(cfg)
    r1 = fn_rest_state(p1)
    p2 = FNParams(**cfg["neuron_2"])
    r2 = fn_rest_state(p2)
    syn = cfg["synapse"]
    pars = np.array([
        p1.C, p1.L, p1.a, p1.b, 0.0,
        p2.C, p2.L, p2.a, p2.b, 0.0,
        syn["tau"], syn["E_syn"], syn["h_gain"], syn["h_center"],
    ])
    x0 = np.array([r1.v, r1.i_L, r2.v, r2.i_L, 0.0, 0.0])
    burn = int(cfg["metrics"]["burn_in_fraction"] * (grid.n_steps + 1))
    window = cfg["metrics"]["window"]

    def condition(mode, gain, label):
        out = _kernels.fn_pair(x0, I, grid.dt, pars, mode, gain)
        t1 = _spike_train(grid, out[:, 0], 0, f"{label}_n1")
        t2 = _spike_train(grid, out[:, 2], 0, f"{label}_n2")
        rep = match_trains(t1, t2, window)
        rms = float(np.sqrt(np.mean((out[burn:, 0] - out[burn:, 2]) ** 2)))
        return out, t1, t2, rep.matched_fraction, rms

    trains = []
    metrics = {}
    out_none, t1, t2, frac, rms = condition(0, 0.0, "uncoupled")
    trains += [t1, t2]
    metrics["uncoupled_matched_fraction"] = frac
    metrics["uncoupled_voltage_rms"] = rms

    out_syn, t1, t2, frac, rms = condition(2, cfg["synaptic_gain"], "synaptic")
    trains += [t1, t2]
    metrics["synaptic_matched_fraction"] = frac
    metrics["synaptic_voltage_rms"] = rms

    first_gain = None
    for gain in cfg["diffusive_gains"]:
        _, t1, t2, frac, rms = condition(1, gain, f"diffusive_{gain:g}")
        trains += [t1, t2]
        metrics[f"diffusive_{gain:g}_matched_fraction"] = frac
        metrics[f"diffusive_{gain:g}_voltage_rms"] = rms
        if first_gain is None and frac >= 0.9:
            first_gain = gain
            metrics["diffusive_threshold_gain"] = gain
            metrics["diffusive_threshold_matched_fraction"] = frac
            metrics["diffusive_threshold_voltage_rms"] = rms

    stride = cfg["output"]["stride"]
    t_out, cols = subsample(grid.times(), {
        "v1_uncoupled": out_none[:, 0], "v2_uncoupled": out_none[:, 2],
        "v1_synaptic": out_syn[:, 0], "v2_synaptic": out_syn[:, 2],
    }, stride)
    return {"voltages": (t_out, cols)}, trains, metrics


register(Experiment(
    id="coupling-comparison",
    description="Heterogeneous pair under shared pulses: diffusive vs synaptic vs none",
    defaults=_coupling_defaults,
    run=_run_coupling,
))


# --- disturbance event rejection with an uncertain internal model -------------

def _event_rejection_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 600.0, "dt": 1e-3},
        "neuron_preset": "fn-classic",
        "presyn_noise": {"mean": -2.0, "std": 1.1, "hold": 2.0, "seed": 218},
        "drive_noise": {"mean": -1.5, "std": 1.5, "hold": 2.0, "seed": 703},
        "synapse": {"tau": 1.5, "g": 2.2, "E_syn": -2.0, "h_gain": 4.0, "h_center": 0.0},
        "deltas": [0.0, 0.05, 0.1, 0.2],
        "metrics": {"window": 2.0},
        "output": {"stride": 50},
    }


def _run_event_rejection(cfg, rng):
    grid = _grid(cfg)
    pn = cfg["presyn_noise"]
    cn = cfg["drive_noise"]
    Ip = frozen_noise(pn["mean"], pn["std"], pn["hold"], pn["seed"])
    Ic = frozen_noise(cn["mean"], cn["std"], cn["hold"], cn["seed"])
    window = cfg["metrics"]["window"]

    base = _run_circuit(cfg, Ip, Ic, False, False, 0.0)
    t_base = _spike_train(grid, base[:, 4], 0, "baseline")
    t_pre = _spike_train(grid, base[:, 0], 0, "presynaptic")

    dist = _run_circuit(cfg, Ip, Ic, True, False, 0.0)
    t_dist = _spike_train(grid, dist[:, 4], 0, "uncompensated")
    rep_unc = match_trains(t_base, t_dist, window)

    trains = [t_pre, t_base, t_dist]
    metrics = {
        "presyn_spikes": float(len(t_pre)),
        "uncompensated_spurious": float(rep_unc.extra_test),
        "match_window": window,
    }
    saved_cols = {"v_baseline": base[:, 4], "v_presynaptic": base[:, 0],
                  "v_uncompensated": dist[:, 4]}
    for delta in cfg["deltas"]:
        comp = _run_circuit(cfg, Ip, Ic, True, True, 0.0, delta=delta)
        label = f"delta_{delta:g}"
        t_comp = _spike_train(grid, comp[:, 4], 0, label)
        trains.append(t_comp)
        rep = match_trains(t_base, t_comp, window)
        rms = float(np.sqrt(np.mean((comp[:, 4] - base[:, 4]) ** 2)))
        metrics[f"{label}_spurious"] = float(rep.extra_test)
        metrics[f"{label}_baseline_matched"] = rep.matched_fraction
        metrics[f"{label}_voltage_rms_diff"] = rms
        metrics[f"{label}_max_voltage_diff"] = float(np.max(np.abs(comp[:, 4] - base[:, 4])))
        saved_cols[f"v_{label}"] = comp[:, 4]

    stride = cfg["output"]["stride"]
    t_out, cols = subsample(grid.times(), saved_cols, stride)
    return {"voltages": (t_out, cols)}, trains, metrics


register(Experiment(
    id="event-rejection",
    description="Uncertain internal model: spurious-event rejection across mismatch levels",
    defaults=_event_rejection_defaults,
    run=_run_event_rejection,
))
