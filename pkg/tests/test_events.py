import numpy as np
import pytest

from eventreg.events import (
    EventTrain, MetricError,
    detect_events, match_trains, reliability, phase_offset, spurious_count, wrap_phase,
)
from eventreg.integrate import TimeGrid, Trajectory, integrate
from eventreg.io import read_events_csv, write_events_csv
from eventreg.models import FNParams, fn_dynamics, fn_rest_state


def sine_trajectory(t_end=20.0, dt=0.001, shift=0.0):
    grid = TimeGrid(0.0, t_end, dt)
    t = grid.times()
    return Trajectory(grid, {"y": np.sin(t - shift)})


def test_event_train_invariants():
    with pytest.raises(ValueError):
        EventTrain(0, "x", (1.0, 1.0))
    with pytest.raises(ValueError):
        EventTrain(0, "x", (2.0, 1.0))
    tr = EventTrain(1, "spike", (0.5, 1.5))
    assert len(tr) == 2


def test_detect_sine_zero_crossings():
    traj = sine_trajectory()
    ev = detect_events(traj, "y", 0.0, "up", refractory=1.0)
    expected = np.array([0.0, 2 * np.pi, 4 * np.pi, 6 * np.pi])
    got = ev.asarray()
    assert len(got) == len(expected)
    assert np.max(np.abs(got - expected)) < 0.001


def test_detect_constant_below_threshold_empty():
    grid = TimeGrid(0.0, 5.0, 0.01)
    traj = Trajectory(grid, {"y": np.full(grid.n_steps + 1, -0.3)})
    ev = detect_events(traj, "y", 0.0, "up")
    assert len(ev) == 0


def test_detect_down_crossings():
    traj = sine_trajectory()
    ev = detect_events(traj, "y", 0.0, "down", refractory=1.0)
    expected = np.array([np.pi, 3 * np.pi, 5 * np.pi])
    assert np.max(np.abs(ev.asarray() - expected)) < 0.001


def test_detect_refractory_drops_close_events():
    grid = TimeGrid(0.0, 10.0, 0.01)
    t = grid.times()
    sig = np.sin(2 * np.pi * t)  # period 1
    traj = Trajectory(grid, {"y": sig})
    all_ev = detect_events(traj, "y", 0.0, "up")
    sparse = detect_events(traj, "y", 0.0, "up", refractory=2.5)
    assert len(all_ev) == 10
    assert len(sparse) == 4  # keeps roughly every third


def test_detect_shift_invariance():
    a = detect_events(sine_trajectory(), "y", 0.3, "up", refractory=1.0)
    grid = TimeGrid(5.0, 25.0, 0.001)
    t = grid.times()
    shifted = Trajectory(grid, {"y": np.sin(t - 5.0)})
    b = detect_events(shifted, "y", 0.3, "up", refractory=1.0)
    assert len(a) == len(b)
    assert np.max(np.abs((b.asarray() - 5.0) - a.asarray())) < 1e-9


def test_fn_limit_cycle_isi_regular():
    p = FNParams()
    rest = fn_rest_state(p)
    traj = integrate(lambda t, x: fn_dynamics(x, 0.5, 0.0, 0.0, p),
                     [rest.v, rest.i_L], TimeGrid(0.0, 400.0, 0.001),
                     state_names=["v", "i_L"])
    ev = detect_events(traj, "v", 1.0, "up", refractory=5.0)
    isi = np.diff(ev.asarray())
    post = isi[2:]  # discard transient
    assert len(post) >= 5
    assert np.std(post) / np.mean(post) < 1e-3


def test_match_identical():
    tr = EventTrain(0, "a", (1.0, 2.0, 3.0))
    rep = match_trains(tr, tr, window=0.5)
    assert rep.matched_fraction == 1.0
    assert rep.jitter == 0.0
    assert rep.unmatched_reference == 0 and rep.extra_test == 0


def test_match_shifted_beyond_window():
    tr = EventTrain(0, "a", (1.0, 2.0, 3.0))
    rep = match_trains(tr, tr.shifted(0.2), window=0.1)
    assert rep.matched_fraction == 0.0
    assert rep.unmatched_reference == 3 and rep.extra_test == 3


def test_match_report_arithmetic():
    ref = EventTrain(0, "r", (1.0, 2.0, 3.0))
    tst = EventTrain(0, "t", (1.01, 2.02, 3.01, 5.0))
    rep = match_trains(ref, tst, window=0.05)
    assert rep.matched_fraction == 1.0
    assert rep.extra_test == 1
    assert abs(rep.jitter - np.std([1.01 - 1.0, 2.02 - 2.0, 3.01 - 3.0])) <= 1e-12


def test_match_is_perfect_on_self():
    rng = np.random.default_rng(5)
    times = np.cumsum(rng.uniform(0.2, 2.0, 30))
    tr = EventTrain(0, "x", tuple(times))
    for w in (1e-6, 0.01, 10.0):
        rep = match_trains(tr, tr, w)
        assert rep.matched_fraction == 1.0 and rep.jitter == 0.0


def test_reliability_trivial_cases():
    tr = EventTrain(0, "a", (1.0, 2.0, 3.0))
    frac, jit = reliability([tr, tr, tr], window=0.1)
    assert frac == 1.0 and jit == 0.0
    empty = EventTrain(1, "a", ())
    frac, jit = reliability([tr, empty], window=0.1)
    assert frac == 0.0


def test_wrap_phase_range():
    vals = wrap_phase(np.array([-0.5, -0.49, 0.0, 0.5, 0.51, 1.0, 1.5]))
    assert np.all(vals > -0.5) and np.all(vals <= 0.5)
    assert wrap_phase(0.5) == 0.5
    assert wrap_phase(-0.5) == 0.5


def test_phase_offset_examples():
    base = EventTrain(0, "b", tuple(np.arange(20) * 2.0))
    assert phase_offset(base, base) == 0.0
    shifted = base.shifted(0.5)  # quarter of the period 2.0
    assert abs(phase_offset(shifted, base) - 0.25) < 1e-9


def test_phase_offset_antisymmetry():
    rng = np.random.default_rng(11)
    base = EventTrain(0, "b", tuple(np.arange(30) * 1.5))
    a = base.shifted(0.3)
    assert abs(phase_offset(a, base) + phase_offset(base, a)) < 1e-9


def test_phase_offset_preconditions():
    short = EventTrain(0, "s", (1.0, 2.0))
    ok = EventTrain(0, "b", (0.0, 1.0, 2.0, 3.0))
    with pytest.raises(MetricError):
        phase_offset(short, ok)
    jittery = EventTrain(0, "j", (0.0, 1.0, 1.3, 3.0, 3.5, 5.0))
    with pytest.raises(MetricError):
        phase_offset(ok, jittery)


def test_spurious_count():
    base = EventTrain(0, "b", (1.0, 2.0, 3.0))
    assert spurious_count(base, base, window=0.1) == 0
    extra = EventTrain(0, "t", (1.0, 2.0, 2.5, 3.0))
    assert spurious_count(base, extra, window=0.1) == 1


def test_spurious_monotone_in_window():
    rng = np.random.default_rng(2)
    base = EventTrain(0, "b", tuple(np.cumsum(rng.uniform(0.5, 1.5, 25))))
    test = EventTrain(0, "t", tuple(np.cumsum(rng.uniform(0.5, 1.5, 25))))
    windows = [0.01, 0.05, 0.1, 0.3, 0.7]
    counts = [spurious_count(base, test, w) for w in windows]
    assert all(c1 >= c2 for c1, c2 in zip(counts, counts[1:]))


def test_events_csv_roundtrip(tmp_path):
    trains = [
        EventTrain(0, "spike", (0.123456789123, 2.5)),
        EventTrain(1, "spike", (1.0,)),
        EventTrain(0, "burst", ()),
    ]
    path = write_events_csv(tmp_path / "events.csv", trains)
    back = read_events_csv(path)
    # a second write of the parsed trains is byte-identical
    path2 = write_events_csv(tmp_path / "events2.csv", back)
    assert path.read_text() == path2.read_text()
    # times agree to the 9 significant digits of the format
    assert np.allclose(back[0].asarray(), trains[0].asarray(), rtol=1e-8)
    assert [t.trial_id for t in back] == [0, 1]
