"""Brute-force identity checks: Pauli-sum/Renyi-2 relation, Holevo equality, Wick failure for cat states."""

from __future__ import annotations

from itertools import product

import numpy as np
from scipy.linalg import expm

from .qubits import QubitState, all_pauli_strings, circuit_unitary, embed, pauli_string
from .sector import (
    SectorState,
    build_interacting_aa,
    holevo,
    mutual_information,
    sector_basis,
)

MAX_OTOC_QUBITS = 6


def _unitary(L: int, evolution, t):
    if isinstance(evolution, (list, tuple)):
        return circuit_unitary(L, evolution)
    m = np.asarray(evolution, dtype=complex)
    if m.shape != (2 ** L, 2 ** L):
        raise ValueError("evolution must be a 2^L x 2^L matrix or a gate list")
    if t is None:
        return m
    return expm(-1j * t * m)


def otoc_identity_check(L: int, evolution, e_sites, a_sites, t=None):
    """Evaluate both sides of the Pauli-sum identity for I(A:R) at Renyi index 2.

    ``evolution`` is a unitary on L qubits, a list of (gate_id, q1, q2)
    Cliffords, or a Hamiltonian evolved for time ``t``.  Every qubit of E is
    Bell-paired with its own reference; the other qubits start in |0>.

    lhs = 2^(-2|Abar| - 2|R|) sum_{P_i on E, P_j on Abar} Tr[(P_j(t) (P_i x |0><0|_Ebar))^2]
    rhs = 2^(|R| - |Abar| - S2(AR)),   with P_j(t) = U^dag P_j U.
    """
    if L > MAX_OTOC_QUBITS:
        raise ValueError(f"brute-force Pauli sums limited to L <= {MAX_OTOC_QUBITS}")
    e_sites = [int(e) for e in e_sites]
    a_sites = [int(a) for a in a_sites]
    abar = [q for q in range(L) if q not in a_sites]
    ebar = [q for q in range(L) if q not in e_sites]
    n_r = len(e_sites)
    u = _unitary(L, evolution, t)
    udag = u.conj().T

    zero_proj = np.array([[1, 0], [0, 0]], dtype=complex)
    if ebar:
        proj = embed(_kron_all([zero_proj] * len(ebar)), ebar, L)
    else:
        proj = np.eye(2 ** L, dtype=complex)
    x_ops = [embed(p, e_sites, L) @ proj for p in all_pauli_strings(n_r)]
    total = 0.0
    for pj in all_pauli_strings(len(abar)):
        y = udag @ embed(pj, abar, L) @ u if abar else np.eye(2 ** L, dtype=complex)
        for x in x_ops:
            yx = y @ x
            total += np.real(np.trace(yx @ yx))
    lhs = total * 2.0 ** (-2 * len(abar) - 2 * n_r)

    state = QubitState(L + n_r)
    for k, e in enumerate(e_sites):
        state.h(e)
        state.cnot(e, L + k)
    state.apply(u, list(range(L)))
    s2 = state.renyi2(a_sites + list(range(L, L + n_r)))
    rhs = 2.0 ** (n_r - len(abar) - s2)
    return float(lhs), float(rhs), float(abs(lhs - rhs))


def _kron_all(mats):
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def xx_hamiltonian(L: int, pbc: bool = False) -> np.ndarray:
    """sum_i (X_i X_{i+1} + Y_i Y_{i+1}) on L qubits."""
    h = np.zeros((2 ** L, 2 ** L), dtype=complex)
    bonds = [(i, i + 1) for i in range(L - 1)] + ([(L - 1, 0)] if pbc and L > 2 else [])
    for a, b in bonds:
        for p in ("XX", "YY"):
            h += embed(pauli_string(p), [a, b], L)
    return h


# -- Holevo equality ------------------------------------------------------------

def random_sector_state(L: int, n: int, rng: np.random.Generator) -> np.ndarray:
    dim = len(sector_basis(L, n))
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _with_modes(system_amp: np.ndarray, L: int, n: int, extra_bits: int, n_extra: int) -> SectorState:
    """System state tensored with a fixed configuration of trailing modes."""
    sys_basis = sector_basis(L, n)
    masks = sys_basis.states | (extra_bits << L)
    full = sector_basis(L + n_extra, n + int(np.bitwise_count(extra_bits)))
    amp = np.zeros(len(full), dtype=complex)
    amp[full.index(masks)] = system_amp
    return SectorState(full, amp)


def holevo_equality_check(L: int, region, t: float, *, w: float = 0.5, U: float = 0.2,
                          theta: float = 0.3, seed: int = 0, flagged: bool = True):
    """Compare the Holevo quantity of two states with I(A:R) of their superposition encoding.

    psi1 = phi1 (x) |0_F>, psi2 = phi2 (x) |1_F> with a decoupled flag F = mode L,
    encoded as (psi1 |1_R> + psi2 |0_R>)/sqrt2 with R = mode L+1.  The flag lies
    outside ``region`` so the cross term Tr_Abar |psi1><psi2| vanishes and the
    two numbers coincide.  With ``flagged=False`` the flag is left empty in both
    states (phi2 gets one particle more), so the condition is generally broken.

    Returns (chi, mi).
    """
    rng = np.random.default_rng(seed)
    region = [int(a) for a in region]
    if any(a >= L for a in region):
        raise ValueError("region must lie in the system")
    n = L // 2
    phi1 = random_sector_state(L, n, rng)
    if flagged:
        phi2 = random_sector_state(L, n, rng)
        psi1 = _with_modes(phi1, L, n, 0b0, 1)
        psi2 = _with_modes(phi2, L, n, 0b1, 1)
        enc1 = _with_modes(phi1, L, n, 0b10, 2)
        enc2 = _with_modes(phi2, L, n, 0b01, 2)
    else:
        phi2 = random_sector_state(L, n + 1, rng)
        psi1 = _with_modes(phi1, L, n, 0b0, 1)
        psi2 = _with_modes(phi2, L, n + 1, 0b0, 1)
        enc1 = _with_modes(phi1, L, n, 0b10, 2)
        enc2 = _with_modes(phi2, L, n + 1, 0b00, 2)
    if enc1.basis.n_particles != enc2.basis.n_particles:
        raise RuntimeError("encoding components differ in particle number")
    enc = SectorState(enc1.basis, (enc1.amplitudes + enc2.amplitudes) / np.sqrt(2))

    h1 = build_interacting_aa(L, 1.0, U, w, theta, True, 1)
    h2 = build_interacting_aa(L, 1.0, U, w, theta, True, 2)
    chi = holevo(h1, psi1, psi2, region, t)
    mi = mutual_information(h2.evolve(enc, t), region, [L + 1])
    return chi, mi


# -- Wick check -------------------------------------------------------------------

def _apply_fermion(state: dict, site: int, create: bool) -> dict:
    out: dict = {}
    for mask, amp in state.items():
        occ = (mask >> site) & 1
        if occ == int(create):
            continue
        sign = -1 if bin(mask & ((1 << site) - 1)).count("1") % 2 else 1
        new = mask ^ (1 << site)
        out[new] = out.get(new, 0) + sign * amp
    return out


def _expect(state: dict, ops) -> complex:
    """<state| o_1 o_2 ... o_k |state> for ops given as (site, is_creation)."""
    phi = dict(state)
    for site, create in reversed(ops):
        phi = _apply_fermion(phi, site, create)
    return sum(np.conj(state.get(m, 0)) * a for m, a in phi.items())


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of a skew-symmetric matrix by pivoted Gaussian elimination."""
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n % 2:
        return 0.0
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k, k + 1:])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k, k + 1] == 0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return pf


def wick_expectation(state: dict, ops) -> complex:
    """Wick-theorem value of <o_1...o_k> built from the state's two-point functions."""
    k = len(ops)
    w = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(i + 1, k):
            w[i, j] = _expect(state, [ops[i], ops[j]])
            w[j, i] = -w[i, j]
    return pfaffian(w)


def cat_operator(L: int):
    """c_0^dag c_1 c_2^dag c_3 ... as (site, is_creation) pairs."""
    return [(i, i % 2 == 0) for i in range(L)]


def wick_violation_check(L: int, state: str = "ghz"):
    """Exact vs Wick-contracted expectation of c0+ c1 c2+ c3 ... .

    ``state`` is ``"ghz"`` for (|0101...> + |1010...>)/sqrt2 or ``"neel"``
    for |0101...>.  Returns (exact, wick) as real numbers.
    """
    if L % 2 or L < 2:
        raise ValueError("L must be even and positive")
    neel = sum(1 << i for i in range(1, L, 2))
    anti = sum(1 << i for i in range(0, L, 2))
    if state == "ghz":
        psi = {neel: 1 / np.sqrt(2), anti: 1 / np.sqrt(2)}
    elif state == "neel":
        psi = {neel: 1.0}
    else:
        raise ValueError("state must be 'ghz' or 'neel'")
    ops = cat_operator(L)
    exact = _expect(psi, ops)
    wick = wick_expectation(psi, ops)
    return float(np.real(exact)), float(np.real(wick))
