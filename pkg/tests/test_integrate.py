import numpy as np
import pytest

from eventreg.integrate import (
    TimeGrid, ResetSchedule, Trajectory, IntegrationError,
    integrate, halving_error, rk4_step,
)
from eventreg.models import PendulumParams, pendulum_dynamics


def oscillator(t, x):
    return np.array([x[1], -x[0]])


def test_grid_invariants():
    g = TimeGrid(0.0, 1.0, 0.01)
    assert g.n_steps == 100
    assert np.allclose(g.times()[[0, -1]], [0.0, 1.0])
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, -0.1)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 0.3)  # not a whole number of steps


def test_harmonic_oscillator_accuracy():
    grid = TimeGrid.from_steps(0.0, 2.0 * np.pi, 628)  # dt ~ 0.01
    traj = integrate(oscillator, [1.0, 0.0], grid)
    final = np.array([traj["x0"][-1], traj["x1"][-1]])
    assert np.max(np.abs(final - [1.0, 0.0])) < 1e-6


def test_zero_field_constant():
    grid = TimeGrid(0.0, 3.0, 0.01)
    traj = integrate(lambda t, x: np.zeros_like(x), [0.3, -2.0], grid)
    assert np.all(traj["x0"] == 0.3)
    assert np.all(traj["x1"] == -2.0)


def test_pendulum_equilibrium():
    p = PendulumParams(a=1.0, c=0.5)
    grid = TimeGrid(0.0, 5.0, 0.001)
    traj = integrate(lambda t, x: pendulum_dynamics(x, 0.0, p), [0.0, 0.0], grid,
                     state_names=["theta", "omega"])
    assert np.all(traj["theta"] == 0.0)
    assert np.all(traj["omega"] == 0.0)


def test_halving_error_fourth_order():
    grid = TimeGrid.from_steps(0.0, 2.0 * np.pi, 126)  # dt ~ 0.05
    exact = lambda t: np.array([np.cos(t), -np.sin(t)])
    e1, e2 = halving_error(oscillator, [1.0, 0.0], grid, exact=exact)
    assert 12.0 <= e1 / e2 <= 20.0


def test_halving_error_linear_decay():
    grid = TimeGrid(0.0, 2.0, 0.05)
    f = lambda t, x: -x
    e1, e2 = halving_error(f, [1.0], grid, exact=lambda t: np.array([np.exp(-t)]))
    assert 12.0 <= e1 / e2 <= 20.0


def test_halving_error_zero_field():
    grid = TimeGrid(0.0, 1.0, 0.1)
    f = lambda t, x: np.zeros_like(x)
    e1, e2 = halving_error(f, [2.0], grid, exact=lambda t: np.array([2.0]))
    assert e1 == 0.0 and e2 == 0.0


def test_halving_error_fine_reference_fallback():
    grid = TimeGrid.from_steps(0.0, 2.0 * np.pi, 126)
    e1, e2 = halving_error(oscillator, [1.0, 0.0], grid)
    assert 12.0 <= e1 / e2 <= 20.0


def test_resets_apply_exactly():
    grid = TimeGrid(0.0, 1.0, 0.01)
    resets = ResetSchedule((
        (0.25, {0: 5.0}),
        (0.5, {0: -1.0, 1: 2.0}),
    ))
    traj = integrate(lambda t, x: np.array([x[1], 0.0]), [0.0, 1.0], grid, resets=resets)
    k1, k2 = grid.index_of(0.25), grid.index_of(0.5)
    assert traj["x0"][k1] == 5.0
    assert traj["x0"][k2] == -1.0 and traj["x1"][k2] == 2.0
    # state keeps integrating from the assignment
    assert traj["x0"][k1 + 1] == pytest.approx(5.0 + 0.01 * 1.0)


def test_reset_times_validated():
    with pytest.raises(ValueError):
        ResetSchedule(((0.5, {0: 1.0}), (0.25, {0: 2.0})))
    grid = TimeGrid(0.0, 1.0, 0.1)
    sched = ResetSchedule(((2.0, {0: 1.0}),))
    with pytest.raises(ValueError):
        sched.indices_for(grid)


def test_nonfinite_derivative_raises_with_context():
    def bad(t, x):
        return np.array([x[0] ** 3])

    grid = TimeGrid(0.0, 10.0, 0.1)
    with pytest.raises(IntegrationError) as err:
        integrate(bad, [2.0], grid, state_names=["v"])
    msg = str(err.value)
    assert "step" in msg and "'v'" in msg


def test_trajectory_invariants():
    grid = TimeGrid(0.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        Trajectory(grid, {"x": np.array([1.0, 2.0])})  # wrong length
    with pytest.raises(ValueError):
        Trajectory(grid, {"x": np.array([1.0, np.nan, 2.0])})


def test_rk4_step_matches_taylor():
    # one step on x' = x has error O(dt^5)
    dt = 0.1
    out = rk4_step(lambda t, x: x, 0.0, np.array([1.0]), dt)
    assert abs(out[0] - np.exp(dt)) < dt ** 5
