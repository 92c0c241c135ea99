"""Declarative input signals evaluated as pure functions of time.

Every signal kind is deterministic given its parameters; frozen noise is
deterministic given (seed, hold interval) through a counter-based hash of
the interval index, so samples can be accessed at any time point without
generator state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import ndtri

__all__ = [
    "SignalSpec",
    "SignalDomainError",
    "constant",
    "sinusoid",
    "pulse_train",
    "frozen_noise",
    "piecewise",
    "eval_signal",
]

_KINDS = ("constant", "sinusoid", "pulse_train", "frozen_noise", "piecewise")


class SignalDomainError(ValueError):
    """A piecewise signal was evaluated outside its covered intervals."""


@dataclass(frozen=True)
class SignalSpec:
    """One input signal: a kind tag plus that kind's parameters."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")

    def __call__(self, t):
        return eval_signal(self, t)

    def to_dict(self) -> dict:
        if self.kind == "piecewise":
            return {
                "kind": "piecewise",
                "pieces": [
                    {"t_lo": lo, "t_hi": hi, "spec": spec.to_dict()}
                    for (lo, hi), spec in self.params["pieces"]
                ],
            }
        return {"kind": self.kind, **self.params}

    @staticmethod
    def from_dict(d: dict) -> "SignalSpec":
        d = dict(d)
        kind = d.pop("kind")
        if kind == "piecewise":
            pieces = [
                ((p["t_lo"], p["t_hi"]), SignalSpec.from_dict(p["spec"]))
                for p in d["pieces"]
            ]
            return piecewise(pieces)
        return SignalSpec(kind, d)


def constant(level: float) -> SignalSpec:
    return SignalSpec("constant", {"level": float(level)})


def sinusoid(offset: float, amplitude: float, omega: float, phase: float = 0.0) -> SignalSpec:
    return SignalSpec("sinusoid", {
        "offset": float(offset), "amplitude": float(amplitude),
        "omega": float(omega), "phase": float(phase),
    })


def pulse_train(amplitude: float, width: float, period: float, start: float = 0.0) -> SignalSpec:
    if width <= 0 or period <= 0:
        raise ValueError("pulse_train needs width > 0 and period > 0")
    return SignalSpec("pulse_train", {
        "amplitude": float(amplitude), "width": float(width),
        "period": float(period), "start": float(start),
    })


def frozen_noise(mean: float, std: float, hold: float, seed: int) -> SignalSpec:
    if std < 0 or hold <= 0:
        raise ValueError("frozen_noise needs std >= 0 and hold > 0")
    return SignalSpec("frozen_noise", {
        "mean": float(mean), "std": float(std),
        "hold": float(hold), "seed": int(seed),
    })


def piecewise(pieces) -> SignalSpec:
    """Ordered (interval, spec) pairs; intervals are [lo, hi), last one closed."""
    pieces = tuple(((float(lo), float(hi)), spec) for (lo, hi), spec in pieces)
    for (lo, hi), _ in pieces:
        if not hi > lo:
            raise ValueError("piecewise intervals need t_hi > t_lo")
    for ((_, hi0), _), ((lo1, _), _) in zip(pieces, pieces[1:]):
        if lo1 < hi0:
            raise ValueError("piecewise intervals must be ordered and non-overlapping")
    return SignalSpec("piecewise", {"pieces": pieces})


# --- counter-based frozen-noise samples -------------------------------------
#
# Sample k is derived from a 64-bit mix of (seed, k); the mapping has no
# sequential state, so evaluation is random access in time and identical
# across runs and platforms.

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> _U64(30))) * _MIX1
    x = (x ^ (x >> _U64(27))) * _MIX2
    return x ^ (x >> _U64(31))


def _noise_samples(seed: int, k: np.ndarray, mean: float, std: float) -> np.ndarray:
    with np.errstate(over="ignore"):
        ku = np.asarray(k, dtype=np.int64).astype(_U64)
        state = _U64(np.int64(seed).astype(_U64)) + (ku + _U64(1)) * _GOLDEN
        bits = _mix64(state)
    # 53-bit uniform strictly inside (0, 1), then inverse normal CDF
    u = (bits >> _U64(11)).astype(np.float64) * 2.0**-53 + 2.0**-54
    return mean + std * ndtri(u)


def eval_signal(spec: SignalSpec, t):
    """Evaluate ``spec`` at time ``t`` (scalar or array), purely in (spec, t)."""
    t_arr = np.asarray(t, dtype=float)
    out = _eval(spec, t_arr)
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out)
    return out


def _eval(spec: SignalSpec, t: np.ndarray) -> np.ndarray:
    p = spec.params
    if spec.kind == "constant":
        return np.full_like(t, p["level"])
    if spec.kind == "sinusoid":
        return p["offset"] + p["amplitude"] * np.sin(p["omega"] * t + p["phase"])
    if spec.kind == "pulse_train":
        tau = t - p["start"]
        on = (tau >= 0.0) & (np.mod(tau, p["period"]) < p["width"])
        return np.where(on, p["amplitude"], 0.0)
    if spec.kind == "frozen_noise":
        k = np.floor(t / p["hold"]).astype(np.int64)
        return _noise_samples(p["seed"], k, p["mean"], p["std"])
    if spec.kind == "piecewise":
        pieces = p["pieces"]
        out = np.empty_like(t)
        covered = np.zeros(t.shape, dtype=bool)
        for (lo, hi), sub in pieces:
            mask = (t >= lo) & (t < hi) & ~covered
            if mask.any():
                out[mask] = _eval(sub, t[mask])
                covered |= mask
        # the final interval is closed on the right
        (_, hi_last), sub_last = pieces[-1]
        tail = (t == hi_last) & ~covered
        if tail.any():
            out[tail] = _eval(sub_last, t[tail])
            covered |= tail
        if not covered.all():
            bad = float(t[~covered].flat[0])
            raise SignalDomainError(f"piecewise signal not defined at t={bad!r}")
        return out
    raise ValueError(f"unknown signal kind {spec.kind!r}")
