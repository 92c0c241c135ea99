"""Event extraction from trajectories and event-level metrics.

Events are threshold crossings with linear interpolation between the
bracketing samples; metrics compare event trains by greedy nearest-neighbor
matching, circular phase offsets, and spurious-event counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .integrate import Trajectory

__all__ = [
    "EventTrain", "MatchReport", "MetricError",
    "detect_events", "match_trains", "reliability", "phase_offset", "spurious_count",
    "wrap_phase",
]


class MetricError(ValueError):
    """An event metric's precondition (periodicity, event count) failed."""


@dataclass(frozen=True)
class EventTrain:
    """Sorted event times for one trial and label."""

    trial_id: int = 0
    label: str = ""
    times: tuple = ()

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1:
            raise ValueError("times must be a flat sequence")
        if np.any(np.diff(t) <= 0):
            raise ValueError("event times must be strictly increasing")
        object.__setattr__(self, "times", tuple(float(v) for v in t))

    def __len__(self) -> int:
        return len(self.times)

    def asarray(self) -> np.ndarray:
        return np.asarray(self.times, dtype=float)

    def within(self, t_lo: float, t_hi: float) -> "EventTrain":
        t = self.asarray()
        keep = t[(t >= t_lo) & (t <= t_hi)]
        return EventTrain(self.trial_id, self.label, tuple(keep))

    def shifted(self, offset: float) -> "EventTrain":
        return EventTrain(self.trial_id, self.label,
                          tuple(t + offset for t in self.times))


@dataclass(frozen=True)
class MatchReport:
    matched_fraction: float
    jitter: float
    unmatched_reference: int
    extra_test: int
    deltas: tuple = field(default=(), repr=False)


def detect_events(traj: Trajectory, column: str, threshold: float,
                  direction: str = "up", refractory: float = 0.0,
                  trial_id: int = 0, label: str | None = None) -> EventTrain:
    """Threshold crossings of one trajectory column, refractory-filtered.

    The event time interpolates linearly between the two samples bracketing
    the crossing.
    """
    if refractory < 0:
        raise ValueError("refractory must be >= 0")
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    s = traj[column]
    t = traj.t
    if direction == "up":
        mask = (s[:-1] <= threshold) & (s[1:] > threshold)
    else:
        mask = (s[:-1] >= threshold) & (s[1:] < threshold)
    idx = np.flatnonzero(mask)
    denom = s[idx + 1] - s[idx]
    frac = np.where(denom != 0.0, (threshold - s[idx]) / denom, 0.0)
    crossings = t[idx] + frac * traj.grid.dt
    kept = []
    last = -np.inf
    for tc in crossings:
        if tc - last >= refractory:
            kept.append(float(tc))
            last = tc
    return EventTrain(trial_id, label if label is not None else column, tuple(kept))


def match_trains(reference: EventTrain, test: EventTrain, window: float) -> MatchReport:
    """Greedy nearest-neighbor matching in time order; |dt| <= window, test events used once."""
    if not window > 0:
        raise ValueError("window must be > 0")
    ref = reference.asarray()
    tst = test.asarray()
    used = np.zeros(tst.size, dtype=bool)
    deltas = []
    for r in ref:
        lo = np.searchsorted(tst, r - window, side="left")
        hi = np.searchsorted(tst, r + window, side="right")
        best = -1
        best_dist = np.inf
        for j in range(lo, hi):
            if used[j]:
                continue
            dist = abs(tst[j] - r)
            if dist < best_dist - 1e-15:
                best, best_dist = j, dist
        if best >= 0:
            used[best] = True
            deltas.append(tst[best] - r)
    matched = len(deltas)
    if ref.size == 0:
        fraction = 1.0
    else:
        fraction = matched / ref.size
    jitter = float(np.std(deltas)) if matched else 0.0
    return MatchReport(
        matched_fraction=float(fraction),
        jitter=jitter,
        unmatched_reference=int(ref.size - matched),
        extra_test=int(tst.size - matched),
        deltas=tuple(float(d) for d in deltas),
    )


def reliability(trains: list[EventTrain], window: float):
    """Mean matched fraction of trials 1..n against trial 0, plus pooled jitter."""
    if len(trains) < 2:
        raise MetricError("reliability needs at least 2 trials")
    fractions = []
    pooled = []
    for tr in trains[1:]:
        rep = match_trains(trains[0], tr, window)
        fractions.append(rep.matched_fraction)
        pooled.extend(rep.deltas)
    jitter = float(np.std(pooled)) if pooled else 0.0
    return float(np.mean(fractions)), jitter


def wrap_phase(x):
    """Wrap to the half-open interval (-1/2, 1/2]."""
    return np.asarray(x) - np.ceil(np.asarray(x) - 0.5)


def phase_offset(a: EventTrain, b: EventTrain) -> float:
    """Mean circular offset of a's events from b's nearest events, in units of b's period."""
    ta = a.asarray()
    tb = b.asarray()
    if ta.size < 3 or tb.size < 3:
        raise MetricError("phase_offset needs at least 3 events per train")
    isi = np.diff(tb)
    T = float(np.mean(isi))
    if np.std(isi) / T >= 0.1:
        raise MetricError("reference train is not periodic enough (ISI rel. std >= 0.1)")
    pos = np.searchsorted(tb, ta)
    left = np.clip(pos - 1, 0, tb.size - 1)
    right = np.clip(pos, 0, tb.size - 1)
    d_left = ta - tb[left]
    d_right = ta - tb[right]
    nearest = np.where(np.abs(d_left) <= np.abs(d_right), d_left, d_right)
    phases = wrap_phase(nearest / T)
    mean_vec = np.mean(np.exp(2j * np.pi * phases))
    return float(wrap_phase(np.angle(mean_vec) / (2.0 * np.pi)))


def spurious_count(baseline: EventTrain, test: EventTrain, window: float) -> int:
    """Test events with no baseline event within the window."""
    return match_trains(baseline, test, window).extra_test
