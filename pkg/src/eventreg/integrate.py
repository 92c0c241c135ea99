"""Fixed-step classical Runge-Kutta integration on a shared time grid.

The grid is the backbone of every experiment: all trials share it, resets
snap to it, and event times refer to it, which keeps repeated runs
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TimeGrid",
    "ResetSchedule",
    "Trajectory",
    "IntegrationError",
    "rk4_step",
    "integrate",
    "halving_error",
]


class IntegrationError(RuntimeError):
    """The vector field or the state became non-finite during integration."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [t0, t_end] with step dt; (t_end - t0) must be a whole number of steps."""

    t0: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError("dt must be > 0")
        if not self.t_end > self.t0:
            raise ValueError("t_end must be > t0")
        span = self.t_end - self.t0
        n = round(span / self.dt)
        if n < 1 or abs(n * self.dt - span) > 1e-9 * span:
            raise ValueError("(t_end - t0) must be an integer multiple of dt (1e-9 relative)")

    @classmethod
    def from_steps(cls, t0: float, t_end: float, n_steps: int) -> "TimeGrid":
        """Grid with an exact step count; convenient for spans like 2*pi."""
        return cls(t0, t_end, (t_end - t0) / n_steps)

    @property
    def n_steps(self) -> int:
        return round((self.t_end - self.t0) / self.dt)

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_steps + 1)

    def index_of(self, t: float) -> int:
        """Nearest grid index to time t."""
        return int(round((t - self.t0) / self.dt))


@dataclass(frozen=True)
class ResetSchedule:
    """Scheduled state assignments; each is applied after the step landing on the nearest grid point.

    Entries are (time, assignment) with assignment a mapping from state index
    to value.
    """

    entries: tuple = ()

    def __post_init__(self):
        ts = [t for t, _ in self.entries]
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ValueError("reset times must be strictly increasing")

    def indices_for(self, grid: TimeGrid) -> dict[int, dict[int, float]]:
        out: dict[int, dict[int, float]] = {}
        for t, assignment in self.entries:
            idx = grid.index_of(t)
            if not 1 <= idx <= grid.n_steps:
                raise ValueError(f"reset time {t} falls outside the grid")
            if idx in out:
                raise ValueError(f"two resets snap to the same grid point (t={t})")
            out[idx] = {int(i): float(v) for i, v in dict(assignment).items()}
        return out


@dataclass
class Trajectory:
    """Named, equally long sample columns over a TimeGrid."""

    grid: TimeGrid
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        n = self.grid.n_steps + 1
        for name, col in self.columns.items():
            col = np.asarray(col, dtype=float)
            if col.shape != (n,):
                raise ValueError(f"column {name!r} has length {col.shape}, expected ({n},)")
            if not np.isfinite(col).all():
                raise ValueError(f"column {name!r} contains non-finite values")
            self.columns[name] = col

    @property
    def t(self) -> np.ndarray:
        return self.grid.times()

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def names(self) -> list[str]:
        return list(self.columns)


def rk4_step(f, t: float, x: np.ndarray, dt: float) -> np.ndarray:
    """One classical 4th-order step of x' = f(t, x)."""
    k1 = f(t, x)
    k2 = f(t + 0.5 * dt, x + (0.5 * dt) * k1)
    k3 = f(t + 0.5 * dt, x + (0.5 * dt) * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _name_of(i: int, state_names) -> str:
    if state_names is not None and i < len(state_names):
        return state_names[i]
    return f"x{i}"


def integrate(f, x0, grid: TimeGrid, resets: ResetSchedule | None = None,
              state_names: list[str] | None = None) -> Trajectory:
    """Integrate x' = f(t, x) over the grid with RK4; apply scheduled resets.

    Inputs enter through the closure ``f``. A reset scheduled at time t is
    applied to the state right after the step that lands on the nearest grid
    point, so the stored sample at that point equals the assignment exactly.
    """
    x = np.asarray(x0, dtype=float).copy()
    if x.ndim != 1:
        raise ValueError("x0 must be a flat state vector")
    n = grid.n_steps
    reset_map = resets.indices_for(grid) if resets is not None else {}
    out = np.empty((n + 1, x.size))
    out[0] = x
    t = grid.t0
    dt = grid.dt
    for k in range(1, n + 1):
        x_new = rk4_step(f, t, x, dt)
        if not np.isfinite(x_new).all():
            dx = np.asarray(f(t, x), dtype=float)
            bad = np.flatnonzero(~np.isfinite(dx))
            if bad.size == 0:
                bad = np.flatnonzero(~np.isfinite(x_new))
            comp = _name_of(int(bad[0]), state_names)
            raise IntegrationError(
                f"non-finite derivative at step {k} (t={t:.6g}), component {comp!r}")
        x = x_new
        if k in reset_map:
            for i, v in reset_map[k].items():
                x[i] = v
        out[k] = x
        t = grid.t0 + k * dt
    names = state_names or [f"x{i}" for i in range(x.size)]
    return Trajectory(grid, {name: out[:, i] for i, name in enumerate(names)})


def halving_error(f, x0, grid: TimeGrid, exact=None):
    """Max-norm terminal errors at dt and dt/2 against an exact or fine-reference solution.

    ``exact`` maps a time to the true state; when omitted, a dt/16 run of the
    same integrator serves as the reference.
    """
    if exact is not None:
        ref = np.asarray(exact(grid.t_end), dtype=float)
    else:
        fine = TimeGrid(grid.t0, grid.t_end, grid.dt / 16.0)
        traj = integrate(f, x0, fine)
        ref = np.array([traj[name][-1] for name in traj.names()])
    errs = []
    for div in (1, 2):
        g = TimeGrid(grid.t0, grid.t_end, grid.dt / div)
        traj = integrate(f, x0, g)
        final = np.array([traj[name][-1] for name in traj.names()])
        errs.append(float(np.max(np.abs(final - ref))))
    return errs[0], errs[1]
