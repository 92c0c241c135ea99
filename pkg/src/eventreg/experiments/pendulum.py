"""Pendulum catalog entries: internal-model tracking and entrainment."""

from __future__ import annotations

import numpy as np

from .base import Experiment, register, subsample
from ..controllers import TrackingGains, internal_model_torque, tracking_control, velocity_coupling
from ..events import detect_events, phase_offset, MetricError
from ..integrate import ResetSchedule, TimeGrid, Trajectory, integrate
from ..models import PendulumParams, pendulum_dynamics
from ..signals import SignalSpec, constant, eval_signal, piecewise, sinusoid


def _grid(cfg) -> TimeGrid:
    g = cfg["grid"]
    return TimeGrid(g["t0"], g["t_end"], g["dt"])


# --- tracking with an internal reference model --------------------------------

def _tracking_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 200.0, "dt": 1e-3},
        "plant": {"a": 1.0, "c": 1.5},
        "reference": {"a": 1.0, "c": 0.25},
        "drive": {"offset": 0.5, "amplitude": 0.5, "omega": 1.0, "phase": 0.0},
        "gains": {"k1": 16.0, "k2": 6.0},
        "error_feedback": {"k_o": 5.0, "k_d": 5.0},
        "initial": {"theta": 0.5, "omega": 0.0},
        "resets": {
            "large": {"time": 80.0, "theta": 0.0, "omega": 2.5},
            "small": {"time": 130.0, "theta": 0.5, "omega": 0.0},
        },
        "windows": {"first": [60.0, 80.0], "large": [110.0, 130.0], "final": [160.0, 200.0]},
        "output": {"stride": 20},
    }


def simulate_tracking(cfg, k_o: float, k_d: float) -> Trajectory:
    """Plant + exosystem + internal model closed loop; resets hit the exosystem only."""
    plant = PendulumParams(**cfg["plant"])
    ref = PendulumParams(**cfg["reference"])
    gains = TrackingGains(**cfg["gains"])
    u_r = sinusoid(**cfg["drive"])

    def f(t, x):
        th, om, th_r, om_r, th_h, om_h = x
        ur = eval_signal(u_r, t)
        e, edot = th - th_r, om - om_r
        eh, ehdot = th - th_h, om - om_h
        u = tracking_control(eh, ehdot, th_h, om_h, ur, plant, ref, gains)
        u_im = internal_model_torque(ur, th_h, om_h, th, om, e, edot, k_o, k_d)
        return np.concatenate([
            pendulum_dynamics((th, om), u, plant),
            pendulum_dynamics((th_r, om_r), ur, ref),
            pendulum_dynamics((th_h, om_h), u_im, ref),
        ])

    r = cfg["resets"]
    resets = ResetSchedule((
        (r["large"]["time"], {2: r["large"]["theta"], 3: r["large"]["omega"]}),
        (r["small"]["time"], {2: r["small"]["theta"], 3: r["small"]["omega"]}),
    ))
    ic = [cfg["initial"]["theta"], cfg["initial"]["omega"]] * 3
    return integrate(f, ic, _grid(cfg), resets=resets,
                     state_names=["theta", "omega", "theta_r", "omega_r",
                                  "theta_hat", "omega_hat"])


def window_error(traj: Trajectory, lo: float, hi: float, open_right: bool) -> float:
    """Max |theta - theta_r| over a window; reset instants are excluded on the right."""
    t = traj.t
    mask = (t >= lo) & ((t < hi) if open_right else (t <= hi))
    return float(np.max(np.abs(traj["theta"][mask] - traj["theta_r"][mask])))


def _run_tracking(cfg, rng):
    fb = cfg["error_feedback"]
    with_fb = simulate_tracking(cfg, fb["k_o"], fb["k_d"])
    without_fb = simulate_tracking(cfg, 0.0, 0.0)

    w = cfg["windows"]
    reset_times = {cfg["resets"]["large"]["time"], cfg["resets"]["small"]["time"]}
    metrics = {}
    for name, (lo, hi) in w.items():
        open_right = hi in reset_times
        metrics[f"max_error_{name}"] = window_error(with_fb, lo, hi, open_right)
        metrics[f"max_error_{name}_no_feedback"] = window_error(without_fb, lo, hi, open_right)

    stride = cfg["output"]["stride"]
    grid = _grid(cfg)
    t_out, cols = subsample(grid.times(), {
        "theta": with_fb["theta"],
        "theta_r": with_fb["theta_r"],
        "theta_hat": with_fb["theta_hat"],
        "error": with_fb["theta"] - with_fb["theta_r"],
        "theta_no_feedback": without_fb["theta"],
        "error_no_feedback": without_fb["theta"] - without_fb["theta_r"],
    }, stride)
    return {"angles": (t_out, cols)}, [], metrics


register(Experiment(
    id="pendulum-tracking",
    description="Bistable reference tracking through an internal pendulum model",
    defaults=_tracking_defaults,
    run=_run_tracking,
))


# --- entrainment and loss of synchrony -----------------------------------------

def _entrainment_defaults():
    return {
        "seed": 1,
        "grid": {"t0": 0.0, "t_end": 100.0, "dt": 1e-3},
        "pendulum_1": {"a": 1.0, "c": 0.5},
        "pendulum_2": {"a": 1.0, "c": 0.4},
        "coupling_gain": 0.5,
        "drive": {"switch_on": 33.0, "switch_off": 66.0, "level": 1.5},
        "initial": {"theta_1": 0.2, "theta_2": -0.2},
        "events": {"refractory": 2.0},
        "windows": {"locked_early": [10.0, 33.0], "constant": [33.0, 66.0],
                    "locked_late": [80.0, 100.0]},
        "output": {"stride": 20},
    }


def _entrainment_drive(cfg) -> SignalSpec:
    d = cfg["drive"]
    t_end = cfg["grid"]["t_end"]
    return piecewise([
        ((cfg["grid"]["t0"], d["switch_on"]), sinusoid(0.0, 1.0, 1.0)),
        ((d["switch_on"], d["switch_off"]), constant(d["level"])),
        ((d["switch_off"], t_end), sinusoid(0.0, 1.0, 1.0)),
    ])


def _wrap_angle(theta: np.ndarray) -> np.ndarray:
    return np.mod(theta + np.pi, 2.0 * np.pi) - np.pi


def _run_entrainment(cfg, rng):
    grid = _grid(cfg)
    p1 = PendulumParams(**cfg["pendulum_1"])
    p2 = PendulumParams(**cfg["pendulum_2"])
    k = cfg["coupling_gain"]
    drive = _entrainment_drive(cfg)

    # single pendulum entrained by the sinusoidal drive alone
    sin_drive = sinusoid(0.0, 1.0, 1.0)
    single = integrate(lambda t, x: pendulum_dynamics(x, eval_signal(sin_drive, t), p1),
                       [cfg["initial"]["theta_1"], 0.0], grid,
                       state_names=["theta", "omega"])

    def f(t, x):
        u = eval_signal(drive, t)
        u1 = u + velocity_coupling(x[1], x[3], k)
        u2 = u + velocity_coupling(x[3], x[1], k)
        return np.concatenate([
            pendulum_dynamics(x[0:2], u1, p1),
            pendulum_dynamics(x[2:4], u2, p2),
        ])

    traj = integrate(f, [cfg["initial"]["theta_1"], 0.0, cfg["initial"]["theta_2"], 0.0],
                     grid, state_names=["theta_1", "omega_1", "theta_2", "omega_2"])
    wrapped = Trajectory(grid, {
        "w1": _wrap_angle(traj["theta_1"]),
        "w2": _wrap_angle(traj["theta_2"]),
        "w_single": _wrap_angle(single["theta"]),
    })
    refr = cfg["events"]["refractory"]
    e1 = detect_events(wrapped, "w1", 0.0, "up", refractory=refr, label="pendulum_1")
    e2 = detect_events(wrapped, "w2", 0.0, "up", refractory=refr, label="pendulum_2")
    e_single = detect_events(wrapped, "w_single", 0.0, "up", refractory=refr,
                             label="single")

    metrics = {}
    for name, (lo, hi) in cfg["windows"].items():
        a, b = e1.within(lo, hi), e2.within(lo, hi)
        metrics[f"{name}_events_1"] = float(len(a))
        metrics[f"{name}_events_2"] = float(len(b))
        try:
            metrics[f"{name}_phase_offset"] = phase_offset(a, b)
            metrics[f"{name}_aperiodic"] = 0.0
        except MetricError:
            metrics[f"{name}_aperiodic"] = 1.0

    stride = cfg["output"]["stride"]
    t_out, cols = subsample(grid.times(), {
        "theta_1": traj["theta_1"], "theta_2": traj["theta_2"],
        "theta_single": single["theta"],
        "drive": eval_signal(drive, grid.times()),
    }, stride)
    return {"angles": (t_out, cols)}, [e1, e2, e_single], metrics


register(Experiment(
    id="pendulum-entrainment",
    description="Velocity-coupled pendula entrained by a common clock, losing sync under constant torque",
    defaults=_entrainment_defaults,
    run=_run_entrainment,
))
