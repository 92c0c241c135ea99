import numpy as np
import pytest

from eventreg.if_network import IFNetwork, if_step, simulate_if, natural_period


def make_net(x, eps=0.0, S=1.0, gamma=0.5):
    n = len(x)
    return IFNetwork(S=(S,) * n, gamma=(gamma,) * n, eps=eps, x=tuple(x))


def test_validation():
    with pytest.raises(ValueError):
        make_net([0.0, 1.2])
    with pytest.raises(ValueError):
        IFNetwork(S=(0.4,), gamma=(0.5,), eps=0.0, x=(0.0,))  # S <= gamma
    with pytest.raises(ValueError):
        IFNetwork(S=(1.0,), gamma=(0.5,), eps=-0.1, x=(0.0,))


def test_single_unit_period_is_analytic():
    # S=1, gamma=0.5 from x=0: period 2 ln 2
    T = natural_period(1.0, 0.5)
    assert abs(T - 2.0 * np.log(2.0)) <= 1e-12
    net = make_net([0.0])
    _, log = simulate_if(net, t_end=10.0, dt=0.3)
    times = np.array([t for t, _ in log])
    expected = T * np.arange(1, len(times) + 1)
    assert len(times) >= 6
    assert np.max(np.abs(times - expected)) < 1e-6


def test_symmetric_pair_stays_synchronous():
    net = make_net([1.0 - 1e-3, 1.0 - 1e-3], eps=0.1)
    _, log = simulate_if(net, t_end=12.0, dt=0.25)
    assert len(log) >= 8
    for _, members in log:
        assert members == frozenset({0, 1})


def test_uncoupled_units_keep_analytic_times():
    net = IFNetwork(S=(1.0, 1.2), gamma=(0.5, 0.4), eps=0.0, x=(0.0, 0.25))
    _, log = simulate_if(net, t_end=8.0, dt=0.2)
    # unit 0 from x=0: multiples of its natural period
    t0 = [t for t, m in log if m == frozenset({0})]
    T0 = natural_period(1.0, 0.5)
    assert np.max(np.abs(np.array(t0) - T0 * np.arange(1, len(t0) + 1))) < 1e-9
    # unit 1 from x=0.25: first crossing analytic, then periodic
    S, g, x0 = 1.2, 0.4, 0.25
    first = np.log((S / g - x0) / (S / g - 1.0)) / g
    T1 = natural_period(S, g)
    t1 = [t for t, m in log if m == frozenset({1})]
    expected = first + T1 * np.arange(len(t1))
    assert np.max(np.abs(np.array(t1) - expected)) < 1e-9
    assert not any(len(m) > 1 for _, m in log)


def test_pair_synchronizes_with_coupling():
    # identical units, small pulse: almost every initial condition synchronizes
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = rng.uniform(0.0, 1.0, size=2)
        net = make_net(x, eps=0.2)
        _, log = simulate_if(net, t_end=60.0, dt=0.5)
        assert any(m == frozenset({0, 1}) for _, m in log)
        # once merged, they stay merged
        merged = [t for t, m in log if m == frozenset({0, 1})]
        after = [m for t, m in log if t > merged[0]]
        assert all(m == frozenset({0, 1}) for m in after)


def test_if_step_contract():
    net = make_net([0.97, 0.5], eps=0.2)
    new, fired = if_step(net, dt=0.2)
    assert fired == {0}
    assert isinstance(new, IFNetwork)
    x = np.asarray(new.x)
    assert np.all((x >= 0.0) & (x <= 1.0))
    # the non-firing unit received the pulse
    assert x[1] > 0.5


def test_states_stay_in_unit_interval():
    rng = np.random.default_rng(7)
    net = IFNetwork(S=tuple(rng.uniform(1.0, 1.5, 6)), gamma=tuple(rng.uniform(0.2, 0.6, 6)),
                    eps=0.3, x=tuple(rng.uniform(0, 1, 6)))
    for _ in range(40):
        net, _ = if_step(net, 0.31)
        x = np.asarray(net.x)
        assert np.all((x >= 0.0) & (x <= 1.0))
