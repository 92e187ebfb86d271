import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siclab.theory import (
    drop_time,
    edge_trapped_mi,
    line_tension,
    line_tension_slope,
    many_to_many_breakpoints,
    many_to_many_steady,
    predict_many_to_many,
    predict_one_to_all,
    predict_one_to_one,
    quasiparticle_mi,
    ssh_dispersion,
    ssh_edge_profile,
    ssh_vmax,
    tight_binding,
    v_butterfly,
    v_entanglement,
    xi_loc,
)

V_E = 0.6438561897747247


def test_line_tension_values():
    assert line_tension(0.0) == pytest.approx(np.log2(5 / 4))
    assert line_tension(1.0) == pytest.approx(np.log2(5 / 2))
    assert line_tension(0.6) == pytest.approx(0.6, abs=1e-12)
    with pytest.raises(ValueError):
        line_tension(1.2)


def test_velocities():
    assert v_entanglement() == pytest.approx(V_E)
    assert v_butterfly() == pytest.approx(1.2)
    # at v_B the line tension touches E(v) = v
    assert line_tension(0.6) == pytest.approx(0.6)
    assert line_tension_slope(0.6) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.999, 0.999))
def test_line_tension_convex_and_above_v(v):
    assert line_tension(v) >= abs(v) - 1e-12
    h = 1e-4
    if abs(v) < 0.99:
        second = line_tension(v + h) - 2 * line_tension(v) + line_tension(v - h)
        assert second > 0


def test_one_to_one_step():
    L = 64
    t = np.array([0.0, 10.0, 30.0, 100.0])
    assert predict_one_to_one(L, 16, t).tolist() == [2, 2, 0, 0]
    assert predict_one_to_one(L, 32, 1000.0) == 1.0
    assert predict_one_to_one(L, 48, 1000.0) == 2.0
    assert drop_time(64) == pytest.approx(64 / (2 * V_E))


def test_one_to_all_curves():
    L = 256
    assert predict_one_to_all(L, 64, 0.0) == 1.0
    assert predict_one_to_all(L, 64, 1000.0) == 0.0
    assert predict_one_to_all(L, 128, 1000.0) == 1.0
    late = predict_one_to_all(L, 192, np.array([10.0, 1000.0]))
    assert late.tolist() == [1.0, 2.0]


def test_many_to_many_three_stages():
    L, la = 256, 160
    t1, t2 = many_to_many_breakpoints(L, la)
    assert predict_many_to_many(L, la, 0.0) == 2.0
    assert predict_many_to_many(L, la, 1000.0) == pytest.approx(many_to_many_steady(L, la))
    assert many_to_many_steady(L, la) == pytest.approx(1.5)
    mid = (t1 + t2) / 2
    slope = (predict_many_to_many(L, la, mid + 1) - predict_many_to_many(L, la, mid - 1)) / 2
    assert slope == pytest.approx(-2 * V_E / (L / 2))
    assert many_to_many_steady(L, 200) == 2.0
    with pytest.raises(ValueError):
        predict_many_to_many(L, 100, 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 64).map(lambda k: 2 * k), st.data())
def test_predictions_conserve_late(L, data):
    # I(A:R) + I(Abar:R) = 2 once every breakpoint has passed
    la = data.draw(st.integers(1, L - 1))
    late = 10.0 * L
    assert predict_one_to_one(L, la, late) + predict_one_to_one(L, L - la, late) == 2.0
    assert predict_one_to_all(L, la, late) + predict_one_to_all(L, L - la, late) == 2.0


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 64).map(lambda k: 2 * k), st.data(), st.floats(0, 500))
def test_predictions_in_range(L, data, t):
    la = data.draw(st.integers(1, L))
    for fn in (predict_one_to_one, predict_one_to_all):
        assert 0.0 <= fn(L, la, t) <= 2.0
    la2 = data.draw(st.integers(L // 2, L))
    v = predict_many_to_many(L, la2, t)
    assert 0.0 <= v <= 2.0


def test_quasiparticle_clean_chain():
    spec = tight_binding()
    assert spec.v_max == pytest.approx(2.0, rel=1e-3)
    L, la = 80, 40
    assert quasiparticle_mi(L, la, 0.0, spec) == pytest.approx(2.0)
    # deviation begins at L_A / (2 v_max)
    assert quasiparticle_mi(L, la, 9.5, spec) == pytest.approx(2.0)
    assert quasiparticle_mi(L, la, 12.0, spec) < 1.9
    assert quasiparticle_mi(L, L, 37.0, spec) == pytest.approx(2.0)


def test_ssh_dispersion():
    for d in (0.0, 0.4, -0.4, 0.9):
        spec = ssh_dispersion(d)
        assert spec.v_max == pytest.approx(ssh_vmax(d), rel=1e-3)


def test_ssh_edge_quantities():
    assert xi_loc(-0.4) == pytest.approx(2 / np.log(1.4 / 0.6))
    xi, p = ssh_edge_profile(-0.4, 80)
    assert p == pytest.approx(1 - (0.6 / 1.4) ** 2, abs=1e-6)
    assert edge_trapped_mi(1.0) == pytest.approx(2.0)
    assert edge_trapped_mi(0.0) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        ssh_edge_profile(0.4, 80)
