import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siclab import gaussian as g
from siclab.circuits import region_sites
from siclab.dense import build_interacting_aa, correlation_matrix, mutual_information, neel_bell_state


def _aa(L, w=0.0, theta=0.0, boundary="periodic"):
    return g.build_aa(g.ModelParams(w=w, theta=theta, boundary=boundary), L)


def test_two_site_rabi_convention():
    # one particle on site 0 of a dimer: n_1(t) = sin^2(J t)
    h = _aa(2)
    C0 = np.diag([1.0, 0.0]).astype(complex)
    for t in (0.0, 0.3, 1.1, 2.0):
        n = g.density(g.evolve(C0, h, t))
        assert n[1] == pytest.approx(np.sin(t) ** 2, abs=1e-12)


def test_bell_encoding_gives_two_bits():
    L = 8
    C = g.encoded_neel(L, 4)
    assert np.allclose(C, C.conj().T)
    assert g.entropy(C, [L]) == pytest.approx(1.0)
    assert g.mutual_information(C, list(range(L)), [L]) == pytest.approx(2.0)
    assert g.mutual_information(C, [3], [L]) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("e", [0, 3])
def test_ancilla_filled_iff_e_empty(e):
    C = g.neel_state(6, 1)
    assert C[e, e].real == (1.0 if e % 2 else 0.0)
    enc = g.encoded_neel(6, e)
    assert np.trace(enc).real == pytest.approx(3.0 + (0 if e % 2 else 1))


def test_ssh_bonds():
    h = g.build_ssh(g.ModelParams(delta=-0.4, boundary="open"), 6).h
    # first bond (between sites 0 and 1) is the weak one for delta < 0
    assert h[0, 1] == pytest.approx(-0.6)
    assert h[1, 2] == pytest.approx(-1.4)
    assert h[0, 5] == 0


def test_aa_potential():
    p = g.ModelParams(w=0.7, theta=0.4)
    h = g.build_aa(p, 5).h
    j = np.arange(1, 6)
    assert np.allclose(np.diag(h), 1.4 * np.cos(2 * np.pi * g.ALPHA * j + 0.4))
    assert h[4, 0] == 1.0


def test_ring_of_two_has_one_bond():
    assert np.allclose(np.linalg.eigvalsh(_aa(2).h), [-1, 1])


def test_interactions_rejected():
    with pytest.raises(ValueError):
        g.ModelParams(U=0.2)
    with pytest.raises(ValueError):
        g.ModelParams(boundary="twisted")


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12).map(lambda k: 2 * k), st.floats(0, 3), st.floats(0, 2 * np.pi),
       st.floats(0, 50), st.booleans(), st.data())
def test_evolution_invariants(L, w, theta, t, periodic, data):
    e = data.draw(st.integers(0, L - 1))
    h = _aa(L, w, theta, "periodic" if periodic else "open")
    C = g.evolve(g.encoded_neel(L, e), h, t)
    ev = np.linalg.eigvalsh(C)
    # still a pure Gaussian state with the same particle number
    assert np.allclose(C, C.conj().T, atol=1e-10)
    assert np.all(ev > -1e-9) and np.all(ev < 1 + 1e-9)
    assert np.allclose(C @ C, C, atol=1e-8)
    assert np.trace(C).real == pytest.approx(np.trace(g.encoded_neel(L, e)).real)
    # conservation: I(A:R) + I(Abar:R) = 2 S_R
    la = data.draw(st.integers(1, L))
    a = region_sites(L, la, e, periodic)
    abar = np.setdiff1d(np.arange(L), a)
    total = g.mutual_information(C, a, [L]) + g.mutual_information(C, abar, [L])
    assert total == pytest.approx(2 * g.entropy(C, [L]), abs=1e-7)


def test_mi_profile_matches_single_calls():
    L = 10
    C = g.evolve(g.encoded_neel(L, 5), _aa(L, 0.5, 1.0), 3.0)
    regions = [region_sites(L, la, 5, True) for la in (2, 5, 10)]
    prof = g.mi_profile(C, regions, [L])
    assert np.allclose(prof, [g.mutual_information(C, a, [L]) for a in regions])


@pytest.mark.parametrize("L, w, theta, t, periodic", [
    (4, 0.0, 0.0, 0.7, True),
    (6, 0.8, 0.3, 2.5, True),
    (6, 2.0, 1.7, 5.0, False),
])
def test_gaussian_matches_dense(L, w, theta, t, periodic):
    e = L // 2
    Cg = g.evolve(g.encoded_neel(L, e), _aa(L, w, theta, "periodic" if periodic else "open"), t)
    H = build_interacting_aa(L, 1.0, 0.0, w, theta, periodic, 1)
    psi = H.evolve(neel_bell_state(L, e), t)
    np.testing.assert_allclose(correlation_matrix(psi), Cg, atol=1e-7)
    for la in range(1, L + 1):
        a = region_sites(L, la, e, periodic)
        assert mutual_information(psi, a, [L]) == pytest.approx(g.mutual_information(Cg, a, [L]), abs=1e-7)


def test_entropy_rejects_bad_region():
    C = g.neel_state(4)
    with pytest.raises(IndexError):
        g.entropy(C, [5])
    with pytest.raises(ValueError):
        g.mutual_information(C, [0, 1], [1])
    assert g.entropy(C, []) == 0.0
