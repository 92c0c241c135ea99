"""Compiled inner loops for the heavy closed-loop simulations.

Each kernel is a fixed-step RK4 integrator specialized to one circuit.
Input signals are passed pre-sampled on the half grid (2 n_steps + 1
points) so the RK4 stages read exact signal values. The scalar arithmetic
mirrors the reference vector fields in eventreg.models; cross-checks live
in the test suite.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["fn_batch", "fn_circuit", "fn_pair", "hco_pendulum"]


@njit(cache=True)
def _sigmoid(x):
    if x > 50.0:
        return 1.0
    if x < -50.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(-x))


@njit(cache=True)
def _held(vals, hold, t):
    idx = int(t / hold)
    if idx < 0:
        idx = 0
    if idx >= vals.shape[0]:
        idx = vals.shape[0] - 1
    return vals[idx]


@njit(cache=True)
def fn_batch(v0, w0, dt, n, base_vals, base_hold, noise_vals, noise_hold,
             C, L, a, b):
    """m independent copies of one FitzHugh-Nagumo neuron under held drives.

    The drive for trial j at time t is the shared base (piecewise constant
    with interval base_hold) plus the trial's own held noise column.
    Returns the full voltage matrix (n + 1, m).
    """
    m = noise_vals.shape[1]
    n_iv = noise_vals.shape[0]
    v_out = np.empty((n + 1, m))
    v = v0.copy()
    w = w0.copy()
    for j in range(m):
        v_out[0, j] = v[j]
    for k in range(n):
        t = k * dt
        th = t + 0.5 * dt
        t1 = t + dt
        b0 = _held(base_vals, base_hold, t)
        bh = _held(base_vals, base_hold, th)
        b1 = _held(base_vals, base_hold, t1)
        i0 = min(int(t / noise_hold), n_iv - 1)
        ih = min(int(th / noise_hold), n_iv - 1)
        i1 = min(int(t1 / noise_hold), n_iv - 1)
        for j in range(m):
            vj = v[j]
            wj = w[j]
            I0 = b0 + noise_vals[i0, j]
            Ih = bh + noise_vals[ih, j]
            I1 = b1 + noise_vals[i1, j]

            dv1 = (vj - vj ** 3 / 3.0 - wj + I0) / C
            dw1 = (-b * wj + vj + a) / L
            v2 = vj + 0.5 * dt * dv1
            w2 = wj + 0.5 * dt * dw1
            dv2 = (v2 - v2 ** 3 / 3.0 - w2 + Ih) / C
            dw2 = (-b * w2 + v2 + a) / L
            v3 = vj + 0.5 * dt * dv2
            w3 = wj + 0.5 * dt * dw2
            dv3 = (v3 - v3 ** 3 / 3.0 - w3 + Ih) / C
            dw3 = (-b * w3 + v3 + a) / L
            v4 = vj + dt * dv3
            w4 = wj + dt * dw3
            dv4 = (v4 - v4 ** 3 / 3.0 - w4 + I1) / C
            dw4 = (-b * w4 + v4 + a) / L

            v[j] = vj + (dt / 6.0) * (dv1 + 2.0 * dv2 + 2.0 * dv3 + dv4)
            w[j] = wj + (dt / 6.0) * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4)
            v_out[k + 1, j] = v[j]
    return v_out


@njit(cache=True)
def _circuit_deriv(x, Ip, Ic, pars, out):
    """Presynaptic neuron + disturbance synapse + observer synapse + controlled neuron.

    State: [v_p, w_p, z_d, s_in, v_c, w_c]. pars:
    [C_p, L_p, a_p, b_p, C_c, L_c, a_c, b_c,
     tau_d, g_d, E_d, tau_in, g_in, E_in, h_gain, h_center]
    """
    v_p, w_p, z_d, s_in, v_c, w_c = x[0], x[1], x[2], x[3], x[4], x[5]
    C_p, L_p, a_p, b_p = pars[0], pars[1], pars[2], pars[3]
    C_c, L_c, a_c, b_c = pars[4], pars[5], pars[6], pars[7]
    tau_d, g_d, E_d = pars[8], pars[9], pars[10]
    tau_in, g_in, E_in = pars[11], pars[12], pars[13]
    h_gain, h_center = pars[14], pars[15]

    h = _sigmoid(h_gain * (v_p - h_center))
    d = g_d * z_d * (v_c - E_d)
    u = -(g_in * s_in * (v_c - E_in))

    out[0] = (v_p - v_p ** 3 / 3.0 - w_p + Ip) / C_p
    out[1] = (-b_p * w_p + v_p + a_p) / L_p
    out[2] = (-z_d + h) / tau_d
    out[3] = (-s_in + h) / tau_in
    out[4] = (v_c - v_c ** 3 / 3.0 - w_c + Ic + (u + d)) / C_c
    out[5] = (-b_c * w_c + v_c + a_c) / L_c


@njit(cache=True)
def fn_circuit(x0, Ip_half, Ic_half, dt, pars):
    """Disturbance-rejection circuit; returns the full (n + 1, 6) state history."""
    n = (Ip_half.shape[0] - 1) // 2
    out = np.empty((n + 1, 6))
    x = x0.copy()
    out[0] = x
    k1 = np.empty(6)
    k2 = np.empty(6)
    k3 = np.empty(6)
    k4 = np.empty(6)
    y = np.empty(6)
    for k in range(n):
        _circuit_deriv(x, Ip_half[2 * k], Ic_half[2 * k], pars, k1)
        for i in range(6):
            y[i] = x[i] + 0.5 * dt * k1[i]
        _circuit_deriv(y, Ip_half[2 * k + 1], Ic_half[2 * k + 1], pars, k2)
        for i in range(6):
            y[i] = x[i] + 0.5 * dt * k2[i]
        _circuit_deriv(y, Ip_half[2 * k + 1], Ic_half[2 * k + 1], pars, k3)
        for i in range(6):
            y[i] = x[i] + dt * k3[i]
        _circuit_deriv(y, Ip_half[2 * k + 2], Ic_half[2 * k + 2], pars, k4)
        for i in range(6):
            x[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        out[k + 1] = x
    return out


@njit(cache=True)
def _pair_deriv(x, I, pars, mode, gain, out):
    """Two heterogeneous FitzHugh-Nagumo neurons under one shared drive.

    State: [v1, w1, v2, w2, z12, z21]. mode 0: uncoupled, 1: symmetric
    diffusive voltage coupling with strength gain, 2: one unidirectional
    synapse from neuron 1 into neuron 2 with maximal conductance gain.
    pars: [C1, L1, a1, b1, I1_bias, C2, L2, a2, b2, I2_bias,
           tau_s, E_syn, h_gain, h_center]
    """
    v1, w1, v2, w2, z12, z21 = x[0], x[1], x[2], x[3], x[4], x[5]
    C1, L1, a1, b1, bias1 = pars[0], pars[1], pars[2], pars[3], pars[4]
    C2, L2, a2, b2, bias2 = pars[5], pars[6], pars[7], pars[8], pars[9]
    tau_s, E_syn, h_gain, h_center = pars[10], pars[11], pars[12], pars[13]

    u1 = 0.0
    u2 = 0.0
    if mode == 1:
        u1 = -gain * (v1 - v2)
        u2 = -gain * (v2 - v1)
    elif mode == 2:
        u2 = gain * z12 * (v2 - E_syn)

    out[0] = (v1 - v1 ** 3 / 3.0 - w1 + I + bias1 + u1) / C1
    out[1] = (-b1 * w1 + v1 + a1) / L1
    out[2] = (v2 - v2 ** 3 / 3.0 - w2 + I + bias2 + u2) / C2
    out[3] = (-b2 * w2 + v2 + a2) / L2
    out[4] = (-z12 + _sigmoid(h_gain * (v1 - h_center))) / tau_s
    out[5] = (-z21 + _sigmoid(h_gain * (v2 - h_center))) / tau_s


@njit(cache=True)
def fn_pair(x0, I_half, dt, pars, mode, gain):
    """Coupled pair run; returns the full (n + 1, 6) state history."""
    n = (I_half.shape[0] - 1) // 2
    out = np.empty((n + 1, 6))
    x = x0.copy()
    out[0] = x
    k1 = np.empty(6)
    k2 = np.empty(6)
    k3 = np.empty(6)
    k4 = np.empty(6)
    y = np.empty(6)
    for k in range(n):
        _pair_deriv(x, I_half[2 * k], pars, mode, gain, k1)
        for i in range(6):
            y[i] = x[i] + 0.5 * dt * k1[i]
        _pair_deriv(y, I_half[2 * k + 1], pars, mode, gain, k2)
        for i in range(6):
            y[i] = x[i] + 0.5 * dt * k2[i]
        _pair_deriv(y, I_half[2 * k + 1], pars, mode, gain, k3)
        for i in range(6):
            y[i] = x[i] + dt * k3[i]
        _pair_deriv(y, I_half[2 * k + 2], pars, mode, gain, k4)
        for i in range(6):
            x[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        out[k + 1] = x
    return out


@njit(cache=True)
def _hco_pend_deriv(x, G, taus, gains, pend, motor, ip1, out):
    """Four coupled bursting neurons, motor map, and the driven pendulum.

    State: [v1, vs1, vus1, ..., v4, vs4, vus4, theta, omega] (14 entries).
    taus: (3, 4) time constants; gains: (4, 4) conductances per neuron
    [g_f_minus, g_s_plus, g_s_minus, g_us_plus]; pend: [a, c];
    motor: [g_m, v_th]; ip1 is the phase-controller current into neuron 1.
    """
    for i in range(4):
        v = x[3 * i]
        vs = x[3 * i + 1]
        vus = x[3 * i + 2]
        I_syn = 0.0
        for j in range(4):
            if G[i, j] != 0.0:
                I_syn += G[i, j] * _sigmoid(2.0 * (x[3 * j + 1] + 1.0))
        ip = ip1 if i == 0 else 0.0
        out[3 * i] = (-v + gains[i, 0] * math.tanh(v)
                      - gains[i, 1] * math.tanh(vs)
                      + gains[i, 2] * math.tanh(vs + 0.9)
                      - gains[i, 3] * math.tanh(vus + 0.9)
                      + I_syn + ip) / taus[0, i]
        out[3 * i + 1] = (v - vs) / taus[1, i]
        out[3 * i + 2] = (v - vus) / taus[2, i]
    s1 = x[0] - motor[1]
    s3 = x[6] - motor[1]
    torque = motor[0] * ((s1 if s1 > 0.0 else 0.0) - (s3 if s3 > 0.0 else 0.0))
    theta = x[12]
    omega = x[13]
    out[12] = omega
    out[13] = -pend[0] * math.sin(theta) - pend[1] * omega + torque


@njit(cache=True)
def hco_pendulum(x0, dt, n_steps, switch_step, G_first, G_second, taus, gains,
                 pend, motor, ctrl, onset_thr, onset_refractory,
                 theta_thr, theta_refractory, stride,
                 max_events):
    """Closed loop: bursting network drives the pendulum; pendulum events gate pulses.

    ctrl: [amplitude, width, gain]; pulses enter neuron 1. The synaptic
    gain matrix switches from G_first to G_second at switch_step.
    Returns (recorded states, theta event times, onset times for neurons 1
    and 3, pulse log (time, amplitude), and the event counts).
    """
    n_rec = n_steps // stride + 1
    rec = np.empty((n_rec, 14))
    x = x0.copy()
    rec[0] = x

    theta_events = np.empty(max_events)
    onsets1 = np.empty(max_events)
    onsets3 = np.empty(max_events)
    pulses = np.empty((max_events, 2))
    n_theta = 0
    n_on1 = 0
    n_on3 = 0
    n_pulse = 0

    # running mean of the neuron-1 onset period
    period_sum = 0.0
    period_count = 0

    pulse_amp = 0.0
    pulse_end = -1.0

    k1 = np.empty(14)
    k2 = np.empty(14)
    k3 = np.empty(14)
    k4 = np.empty(14)
    y = np.empty(14)

    prev_vs1 = x[1]
    prev_vs3 = x[7]
    prev_theta = x[12]
    last_on1 = -1.0e18
    last_on3 = -1.0e18
    last_theta_ev = -1.0e18

    r = 1
    for k in range(n_steps):
        t = k * dt
        G = G_first if k < switch_step else G_second
        ip_a = pulse_amp if t < pulse_end else 0.0
        ip_b = pulse_amp if t + 0.5 * dt < pulse_end else 0.0
        ip_c = pulse_amp if t + dt < pulse_end else 0.0

        _hco_pend_deriv(x, G, taus, gains, pend, motor, ip_a, k1)
        for i in range(14):
            y[i] = x[i] + 0.5 * dt * k1[i]
        _hco_pend_deriv(y, G, taus, gains, pend, motor, ip_b, k2)
        for i in range(14):
            y[i] = x[i] + 0.5 * dt * k2[i]
        _hco_pend_deriv(y, G, taus, gains, pend, motor, ip_b, k3)
        for i in range(14):
            y[i] = x[i] + dt * k3[i]
        _hco_pend_deriv(y, G, taus, gains, pend, motor, ip_c, k4)
        for i in range(14):
            x[i] = x[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])

        t_new = (k + 1) * dt

        # burst onsets: slow voltages crossing up through the onset threshold
        vs1 = x[1]
        if prev_vs1 <= onset_thr < vs1 and t_new - last_on1 >= onset_refractory:
            frac = (onset_thr - prev_vs1) / (vs1 - prev_vs1)
            t_ev = t + dt * frac
            if n_on1 < max_events:
                onsets1[n_on1] = t_ev
                n_on1 += 1
            if last_on1 > -1.0e17:
                period_sum += t_ev - last_on1
                period_count += 1
            last_on1 = t_ev
        prev_vs1 = vs1

        vs3 = x[7]
        if prev_vs3 <= onset_thr < vs3 and t_new - last_on3 >= onset_refractory:
            frac = (onset_thr - prev_vs3) / (vs3 - prev_vs3)
            if n_on3 < max_events:
                onsets3[n_on3] = t + dt * frac
                n_on3 += 1
            last_on3 = t + dt * frac
        prev_vs3 = vs3

        # measured pendulum events: theta crossing up through theta_thr
        theta = x[12]
        if prev_theta <= theta_thr < theta and t_new - last_theta_ev >= theta_refractory:
            frac = (theta_thr - prev_theta) / (theta - prev_theta)
            t_ev = t + dt * frac
            if n_theta < max_events:
                theta_events[n_theta] = t_ev
                n_theta += 1
            last_theta_ev = t_ev
            # emit a pulse proportional to the wrapped normalized phase error
            if period_count >= 1 and ctrl[0] > 0.0:
                T = period_sum / period_count
                dphi = (t_ev - last_on1) / T
                dphi = dphi - math.ceil(dphi - 0.5)
                pulse_amp = ctrl[0] * ctrl[2] * dphi
                pulse_end = t_ev + ctrl[1]
                if n_pulse < max_events:
                    pulses[n_pulse, 0] = t_ev
                    pulses[n_pulse, 1] = pulse_amp
                    n_pulse += 1
        prev_theta = theta

        if (k + 1) % stride == 0:
            rec[r] = x
            r += 1

    return rec, theta_events[:n_theta], onsets1[:n_on1], onsets3[:n_on3], \
        pulses[:n_pulse], n_theta, n_on1, n_on3
