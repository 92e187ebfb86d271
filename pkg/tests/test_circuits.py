import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siclab.circuits import (
    CircuitSpec,
    RegionSchedule,
    brickwall_pairs,
    region_sites,
    run_trajectory,
    step,
    steady_sweep,
)
from siclab.dense import QubitState
from siclab.stabilizer import gate_unitary, init_encoded


def test_brickwall_pairs_cover_chain():
    (a, b), (c, d) = brickwall_pairs(8, True)
    assert list(zip(a, b)) == [(0, 1), (2, 3), (4, 5), (6, 7)]
    assert list(zip(c, d)) == [(1, 2), (3, 4), (5, 6), (7, 0)]
    _, (c, d) = brickwall_pairs(8, False)
    assert (7, 0) not in list(zip(c, d))


@pytest.mark.parametrize("L, la, center, periodic, expected", [
    (10, 4, 5, True, [3, 4, 5, 6]),
    (10, 3, 5, True, [4, 5, 6]),
    (10, 4, 0, True, [0, 1, 8, 9]),
    (10, 4, 0, False, [0, 1, 2, 3]),
    (10, 4, 9, False, [6, 7, 8, 9]),
])
def test_region_sites(L, la, center, periodic, expected):
    assert region_sites(L, la, center, periodic).tolist() == expected


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30).map(lambda k: 2 * k), st.data())
def test_region_contains_center(L, data):
    la = data.draw(st.integers(1, L))
    c = data.draw(st.integers(0, L - 1))
    per = data.draw(st.booleans())
    sites = region_sites(L, la, c, per)
    assert len(set(sites.tolist())) == la
    assert sites.min() >= 0 and sites.max() < L
    if per:
        assert c in sites


def test_spec_validation():
    with pytest.raises(ValueError):
        CircuitSpec(7)
    with pytest.raises(ValueError):
        CircuitSpec(8, p_m=1.5)
    with pytest.raises(ValueError):
        CircuitSpec(8, p_m=0.1, floquet=True)
    with pytest.raises(ValueError):
        CircuitSpec(8, scheme="nope")


def test_trajectory_is_deterministic():
    spec = CircuitSpec(16, p_m=0.1, depth=10)
    sched = RegionSchedule((4, 8, 16), tuple(range(11)))
    a = run_trajectory(spec, sched, 99)
    b = run_trajectory(spec, sched, 99)
    assert np.array_equal(a.mean, b.mean)


def test_initial_mi_is_two():
    spec = CircuitSpec(16, depth=0)
    s = run_trajectory(spec, RegionSchedule((1, 4, 16), (0,)), 0)
    assert s.mean.tolist() == [[2, 2, 2]]


def test_floquet_replays_first_layer():
    L = 8
    spec = CircuitSpec(L, floquet=True, depth=4)
    rng = np.random.default_rng(1)
    state = init_encoded(L, "one_to_one")
    first = step(state, spec, rng, 0)
    for t in range(1, 4):
        again = step(state, spec, rng, t, first)
        assert np.array_equal(again.odd, first.odd) and np.array_equal(again.even, first.even)


def test_floquet_trajectory_uses_one_layer():
    # a Floquet run equals applying the first double layer over and over
    L = 8
    spec = CircuitSpec(L, floquet=True, depth=3)
    s = run_trajectory(spec, RegionSchedule((4,), (3,)), 7)
    rng = np.random.default_rng(7)
    st_ = init_encoded(L, "one_to_one")
    layer = step(st_, spec, rng, 0)
    step(st_, spec, rng, 1, layer)
    step(st_, spec, rng, 2, layer)
    a = region_sites(L, 4, L // 2, True)
    assert s.mean[0, 0] == st_.mutual_information(a, [L])


def test_zero_rate_draws_no_measurement_randomness():
    spec0 = CircuitSpec(8, depth=5)
    r1, r2 = np.random.default_rng(4), np.random.default_rng(4)
    s1, s2 = init_encoded(8, "one_to_one"), init_encoded(8, "one_to_one")
    for t in range(5):
        g = step(s1, spec0, r1, t)
        assert not g.measured
        step(s2, spec0, r2, t)
    assert r1.integers(1 << 40) == r2.integers(1 << 40)


def test_step_matches_state_vector():
    # one double layer of the circuit applied to a dense register
    L = 4
    spec = CircuitSpec(L)
    rng = np.random.default_rng(11)
    tab = init_encoded(L, "one_to_one")
    gates = step(tab, spec, rng, 0)
    psi = QubitState(L + 1)
    psi.h(L // 2)
    psi.cnot(L // 2, L)
    (a, b), (c, d) = brickwall_pairs(L, True)
    for g, q1, q2 in zip(gates.odd, a, b):
        psi.apply(gate_unitary(int(g)), [int(q1), int(q2)])
    for g, q1, q2 in zip(gates.even, c, d):
        psi.apply(gate_unitary(int(g)), [int(q1), int(q2)])
    for region in ([0], [1, 2], [0, 3], [0, 1, 2, 3]):
        assert tab.mutual_information(region, [L]) == pytest.approx(psi.mutual_information(region, [L]), abs=1e-9)


@pytest.mark.parametrize("scheme", ["one_to_one", "one_to_all", "many_to_many"])
@pytest.mark.parametrize("p_m", [0.0, 0.2])
def test_conservation_law_exact(scheme, p_m):
    # I(A:R) + I(Abar:R) = 2 S_R on every recorded step
    L = 16
    spec = CircuitSpec(L, p_m=p_m, depth=20, scheme=scheme)
    rng = np.random.default_rng(2)
    tab = init_encoded(L, scheme)
    ref = list(range(L, L + spec.n_ref))
    for t in range(20):
        step(tab, spec, rng, t)
        for la in (1, 5, 8, 13):
            a = region_sites(L, la, spec.center, True)
            abar = np.setdiff1d(np.arange(L), a)
            total = tab.mutual_information(a, ref) + tab.mutual_information(abar, ref)
            assert total == 2 * tab.entropy(ref)


def test_many_to_many_is_normalized():
    spec = CircuitSpec(16, scheme="many_to_many", depth=0)
    s = run_trajectory(spec, RegionSchedule((16,), (0,)), 0)
    assert s.mean[0, 0] == 2.0


def test_steady_sweep_shapes():
    spec = CircuitSpec(16, depth=32)
    out = steady_sweep(spec, [4, 8, 12], seed=0)
    assert out.shape == (3,)
    assert np.all((0 <= out) & (out <= 2))
    with pytest.raises(ValueError):
        steady_sweep(CircuitSpec(16, depth=10), [4])
