"""Pulse-coupled leaky integrate-and-fire network with exact threshold times.

Each unit rises as x' = S - gamma * x toward x_inf = S / gamma > 1, which is
concave, so the closed-form flow gives exact firing times. A firing unit
resets to 0 and bumps every other unit by eps; bumps are processed as an
avalanche whose members all share one event time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["IFNetwork", "if_step", "simulate_if", "natural_period"]

_AT_THRESHOLD = 1e-12


@dataclass(frozen=True)
class IFNetwork:
    S: tuple          # per-unit drive
    gamma: tuple      # per-unit leak
    eps: float        # pulse increment
    x: tuple          # states in [0, 1]

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if not (S.shape == g.shape == x.shape and S.ndim == 1):
            raise ValueError("S, gamma, x must be equal-length vectors")
        if np.any(g < 0) or np.any(S <= g):
            raise ValueError("need S_i > gamma_i >= 0 so every unit reaches threshold")
        if self.eps < 0:
            raise ValueError("eps must be >= 0")
        if np.any(x < 0) or np.any(x > 1):
            raise ValueError("states must lie in [0, 1]")

    @property
    def n(self) -> int:
        return len(self.S)

    def arrays(self):
        return (np.asarray(self.S, float), np.asarray(self.gamma, float),
                np.asarray(self.x, float))


def natural_period(S: float, gamma: float) -> float:
    """Uncoupled time from 0 to threshold."""
    if gamma == 0.0:
        return 1.0 / S
    return np.log(S / (S - gamma)) / gamma


def _flow(x, S, gamma, dt):
    out = np.empty_like(x)
    leaky = gamma > 0
    if np.any(leaky):
        xinf = S[leaky] / gamma[leaky]
        out[leaky] = xinf + (x[leaky] - xinf) * np.exp(-gamma[leaky] * dt)
    lin = ~leaky
    if np.any(lin):
        out[lin] = x[lin] + S[lin] * dt
    return out


def _time_to_threshold(x, S, gamma):
    out = np.empty_like(x)
    at = x >= 1.0 - _AT_THRESHOLD
    out[at] = 0.0
    rest = ~at
    leaky = rest & (gamma > 0)
    if np.any(leaky):
        xinf = S[leaky] / gamma[leaky]
        out[leaky] = np.log((xinf - x[leaky]) / (xinf - 1.0)) / gamma[leaky]
    lin = rest & (gamma == 0)
    if np.any(lin):
        out[lin] = (1.0 - x[lin]) / S[lin]
    return out


def _avalanche(x, eps):
    """Fire all units at threshold, propagating pulses; returns the fired set."""
    fired: set[int] = set()
    frontier = set(np.flatnonzero(x >= 1.0 - _AT_THRESHOLD).tolist())
    while frontier:
        fired |= frontier
        for i in frontier:
            x[i] = 0.0
        others = [i for i in range(x.size) if i not in fired]
        if others and eps > 0.0:
            idx = np.array(others)
            x[idx] = np.minimum(1.0, x[idx] + eps * len(frontier))
            frontier = set(idx[x[idx] >= 1.0 - _AT_THRESHOLD].tolist())
        else:
            frontier = set()
    return fired


def _advance(x, S, gamma, eps, dt):
    """Flow by dt, firing exactly at threshold crossings; returns avalanche log."""
    events = []
    t_loc = 0.0
    min_period = float(np.min([natural_period(s, g) for s, g in zip(S, gamma)]))
    max_events = 100 + 10 * x.size * int(dt / min_period + 2)
    while True:
        hit = _time_to_threshold(x, S, gamma)
        t_hit = float(np.min(hit))
        if t_loc + t_hit > dt:
            break
        x[:] = _flow(x, S, gamma, t_hit)
        t_loc += t_hit
        # everything whose crossing time coincides with the earliest fires together
        x[hit <= t_hit + _AT_THRESHOLD] = 1.0
        fired = _avalanche(x, eps)
        events.append((t_loc, frozenset(fired)))
        if len(events) > max_events:
            raise RuntimeError("avalanche loop failed to terminate")
    x[:] = _flow(x, S, gamma, dt - t_loc)
    return events


def if_step(net: IFNetwork, dt: float):
    """Advance the network by dt; returns (updated network, indices fired during the step)."""
    S, gamma, x = net.arrays()
    events = _advance(x, S, gamma, net.eps, dt)
    fired = set()
    for _, members in events:
        fired |= set(members)
    new = IFNetwork(S=tuple(S), gamma=tuple(gamma), eps=net.eps, x=tuple(x))
    return new, fired


def simulate_if(net: IFNetwork, t_end: float, dt: float):
    """Run until t_end; returns (final network, [(time, frozenset members), ...])."""
    S, gamma, x = net.arrays()
    log = []
    n_steps = int(round(t_end / dt))
    for k in range(n_steps):
        for t_loc, members in _advance(x, S, gamma, net.eps, dt):
            log.append((k * dt + t_loc, members))
    final = IFNetwork(S=tuple(S), gamma=tuple(gamma), eps=net.eps, x=tuple(x))
    return final, log
