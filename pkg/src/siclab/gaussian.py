"""Free-fermion quenches via single-particle correlation matrices.

States are particle-number conserving Gaussian states described by
``C[i, j] = <c_i^dag c_j>``.  The reference qubit is one extra lattice
site (index ``L``) that the Hamiltonian never touches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ALPHA = (np.sqrt(5.0) - 1.0) / 2.0
NU_CLAMP = 1e-12


@dataclass(frozen=True)
class ModelParams:
    J: float = 1.0
    w: float = 0.0
    theta: float = 0.0
    alpha: float = ALPHA
    delta: float = 0.0
    U: float = 0.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.boundary not in ("periodic", "open"):
            raise ValueError("boundary must be 'periodic' or 'open'")
        if self.U != 0:
            raise ValueError("interactions (U != 0) need the dense backend")


@dataclass
class SingleParticleHamiltonian:
    """Hermitian hopping matrix; rows/columns beyond ``L`` are the decoupled ancilla."""

    h: np.ndarray
    model: str
    params: ModelParams
    L: int
    _eig: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if not np.allclose(self.h, self.h.conj().T, atol=1e-12):
            raise ValueError("h must be Hermitian")

    def with_ancilla(self, n_ancilla: int = 1) -> "SingleParticleHamiltonian":
        n = self.h.shape[0]
        h = np.zeros((n + n_ancilla, n + n_ancilla), dtype=self.h.dtype)
        h[:n, :n] = self.h
        return SingleParticleHamiltonian(h, self.model, self.params, self.L)

    def eigh(self):
        if self._eig is None:
            self._eig = np.linalg.eigh(self.h)
        return self._eig

    def propagator(self, t: float) -> np.ndarray:
        """exp(-i h t) via the cached spectral decomposition."""
        e, v = self.eigh()
        return (v * np.exp(-1j * e * t)) @ v.conj().T


def _bonds(L: int, periodic: bool):
    bonds = [(i, i + 1) for i in range(L - 1)]
    # two sites on a ring share a single bond
    if periodic and L > 2:
        bonds.append((L - 1, 0))
    return bonds


def build_aa(params: ModelParams, L: int) -> SingleParticleHamiltonian:
    """Aubry-Andre chain: hopping J, potential 2w cos(2 pi alpha j + theta), j = 1..L."""
    h = np.zeros((L, L))
    for i, j in _bonds(L, params.boundary == "periodic"):
        h[i, j] += params.J
        h[j, i] += params.J
    j = np.arange(1, L + 1)
    h[np.diag_indices(L)] = 2 * params.w * np.cos(2 * np.pi * params.alpha * j + params.theta)
    return SingleParticleHamiltonian(h, "aa", params, L)


def build_ssh(params: ModelParams, L: int) -> SingleParticleHamiltonian:
    """SSH chain: bond j (1-based, between sites j and j+1) has hopping -(1 - (-1)^j delta).

    Negative ``delta`` puts the weak bond at the chain end (topological).
    """
    h = np.zeros((L, L))
    for i, j in _bonds(L, params.boundary == "periodic"):
        amp = -(1.0 - (-1.0) ** (i + 1) * params.delta)
        h[i, j] += amp
        h[j, i] += amp
    return SingleParticleHamiltonian(h, "ssh", params, L)


def neel_state(L: int, n_ancilla: int = 0) -> np.ndarray:
    """Correlation matrix of |0101...> on the system, ancillas empty."""
    if L % 2:
        raise ValueError("Neel state needs even L")
    occ = np.zeros(L + n_ancilla)
    occ[1:L:2] = 1.0
    return np.diag(occ).astype(complex)


def pair_unitary(n: int, a: int, b: int, angle: float) -> np.ndarray:
    """Single-particle exp(-i angle (|a><b| + |b><a|)) on ``n`` modes."""
    u = np.eye(n, dtype=complex)
    c, s = np.cos(angle), np.sin(angle)
    u[a, a] = u[b, b] = c
    u[a, b] = u[b, a] = -1j * s
    return u


def apply_single_particle(C: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Correlation matrix after the many-body unitary generated by ``u``.

    With c_j -> sum_k u[j, k] c_k this is conj(u) C u^T.
    """
    return u.conj() @ C @ u.T


def bell_encode(C: np.ndarray, e_site: int, r_site: int, angle: float = np.pi / 4) -> np.ndarray:
    """Hop the single particle on (e, r) for time ``angle``; pi/4 makes a Bell pair."""
    if e_site == r_site:
        raise ValueError("e_site and r_site must differ")
    ne = C[e_site, e_site].real
    nr = C[r_site, r_site].real
    if abs(ne + nr - 1) > 1e-10 or abs(abs(ne - nr) - 1) > 1e-10:
        raise ValueError("Bell encoding needs exactly one particle on the pair")
    u = pair_unitary(C.shape[0], e_site, r_site, angle)
    return apply_single_particle(C, u)


def encoded_neel(L: int, e_site: int) -> np.ndarray:
    """Neel system plus one ancilla at index L, Bell-paired with site ``e_site``."""
    if not 0 <= e_site < L:
        raise ValueError("e_site out of range")
    C = neel_state(L, 1)
    if C[e_site, e_site].real == 0:
        C[L, L] = 1.0
    return bell_encode(C, e_site, L)


def evolve(C: np.ndarray, h, t: float) -> np.ndarray:
    """C(t) for evolution under exp(-i H t); ``h`` may include the ancilla or not."""
    ham = h if isinstance(h, SingleParticleHamiltonian) else SingleParticleHamiltonian(np.asarray(h), "custom", None, len(h))
    n = C.shape[0]
    m = ham.h.shape[0]
    if m > n:
        raise ValueError("Hamiltonian larger than the state")
    u_sys = ham.propagator(t)
    if m == n:
        return apply_single_particle(C, u_sys)
    # remaining modes (ancillas) do not evolve
    u = np.eye(n, dtype=complex)
    u[:m, :m] = u_sys
    return apply_single_particle(C, u)


def evolve_many(C: np.ndarray, h: SingleParticleHamiltonian, times) -> np.ndarray:
    """Stack of C(t) for all ``times`` sharing one diagonalization."""
    return np.stack([evolve(C, h, t) for t in times])


def binary_entropy_bits(nu) -> np.ndarray:
    nu = np.clip(np.asarray(nu, dtype=float), NU_CLAMP, 1 - NU_CLAMP)
    return -(nu * np.log2(nu) + (1 - nu) * np.log2(1 - nu))


def entropy(C: np.ndarray, region) -> float:
    """Von Neumann entropy (bits) of the modes in ``region``."""
    idx = np.asarray(region, dtype=np.int64).reshape(-1)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= C.shape[0]:
        raise IndexError("region out of range")
    nu = np.linalg.eigvalsh(C[np.ix_(idx, idx)])
    return float(binary_entropy_bits(nu).sum())


def mutual_information(C: np.ndarray, a, r) -> float:
    a = np.asarray(a, dtype=np.int64).reshape(-1)
    r = np.asarray(r, dtype=np.int64).reshape(-1)
    if np.intersect1d(a, r).size:
        raise ValueError("regions overlap")
    return entropy(C, a) + entropy(C, r) - entropy(C, np.concatenate([a, r]))


def mi_profile(C: np.ndarray, regions, ref) -> np.ndarray:
    """I(A:R) for each region A in ``regions``."""
    ref = np.asarray(ref, dtype=np.int64).reshape(-1)
    s_r = entropy(C, ref)
    return np.array([entropy(C, a) + s_r - entropy(C, np.concatenate([np.asarray(a), ref]))
                     for a in regions])


def density(C: np.ndarray) -> np.ndarray:
    return np.real(np.diag(C))
