"""Exact dynamics of interacting spinless fermion chains at fixed particle number.

Sites ``0..L-1`` form the chain; extra modes ``L, L+1, ...`` are decoupled
ancillas (references or flags).  Occupations are bitmasks with site ``i`` on
bit ``i`` and the Jordan-Wigner order follows the site index, so ancillas
come last.  Because the ancillas never move, the Hamiltonian is block
diagonal in their configuration and each block is a system-only sector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from ..gaussian import ALPHA, NU_CLAMP

MAX_SECTOR_DIM = 8000


def popcount(x) -> np.ndarray:
    return np.bitwise_count(np.asarray(x, dtype=np.int64)).astype(np.int64)


@dataclass(frozen=True)
class SectorBasis:
    """All occupation bitmasks of ``n_sites`` modes with ``n_particles`` fermions, ascending."""

    n_sites: int
    n_particles: int
    states: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    def index(self, masks) -> np.ndarray:
        """Positions of ``masks`` in the basis; -1 for masks outside it."""
        m = np.asarray(masks, dtype=np.int64)
        pos = np.searchsorted(self.states, m)
        pos = np.clip(pos, 0, len(self.states) - 1)
        return np.where(self.states[pos] == m, pos, -1)


_BASIS_CACHE: dict = {}


def sector_basis(n_sites: int, n_particles: int) -> SectorBasis:
    key = (n_sites, n_particles)
    if key not in _BASIS_CACHE:
        if not 0 <= n_particles <= n_sites:
            states = np.zeros(0, dtype=np.int64)
        else:
            states = np.array(
                sorted(sum(1 << i for i in c) for c in combinations(range(n_sites), n_particles)),
                dtype=np.int64,
            )
        _BASIS_CACHE[key] = SectorBasis(n_sites, n_particles, states)
    return _BASIS_CACHE[key]


@dataclass
class SectorState:
    """Amplitudes over a :class:`SectorBasis`."""

    basis: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (len(self.basis),):
            raise ValueError("amplitude vector does not match the basis")

    @property
    def n_sites(self) -> int:
        return self.basis.n_sites

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def densities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        bits = (self.basis.states[:, None] >> np.arange(self.n_sites)) & 1
        return p @ bits

    @classmethod
    def from_mask(cls, n_sites: int, mask: int) -> "SectorState":
        basis = sector_basis(n_sites, int(popcount(mask)))
        amp = np.zeros(len(basis), dtype=complex)
        amp[basis.index([mask])[0]] = 1.0
        return cls(basis, amp)


def _jw_sign(states, lo, hi):
    """(-1)^(occupied sites strictly between lo and hi)."""
    between = ((1 << hi) - 1) ^ ((1 << (lo + 1)) - 1)
    return 1 - 2 * (popcount(states & between) & 1)


def hop(state: SectorState, i: int, j: int) -> SectorState:
    """c_i^dag c_j |state> (same sector); amplitudes where it vanishes are dropped."""
    s = state.basis.states
    has_j = ((s >> j) & 1) == 1
    ok = has_j & (((s >> i) & 1) == 0) if i != j else has_j
    out = np.zeros_like(state.amplitudes)
    if i == j:
        out[ok] = state.amplitudes[ok]
        return SectorState(state.basis, out)
    src = np.flatnonzero(ok)
    tgt = state.basis.index(s[src] ^ ((1 << i) | (1 << j)))
    sign = _jw_sign(s[src], min(i, j), max(i, j))
    out[tgt] = sign * state.amplitudes[src]
    return SectorState(state.basis, out)


def correlation_matrix(state: SectorState) -> np.ndarray:
    """C[i, j] = <c_i^dag c_j> of a sector state."""
    n = state.n_sites
    c = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            c[i, j] = np.vdot(state.amplitudes, hop(state, i, j).amplitudes)
    return c


def chain_bonds(L: int, pbc: bool):
    bonds = [(i, i + 1) for i in range(L - 1)]
    if pbc and L > 2:
        bonds.append((L - 1, 0))
    return bonds


def _system_matrix(L, n, J, U, potential, pbc) -> np.ndarray:
    basis = sector_basis(L, n)
    s = basis.states
    dim = len(s)
    if dim > MAX_SECTOR_DIM:
        raise MemoryError(f"sector dimension {dim} exceeds the budget of {MAX_SECTOR_DIM}")
    h = np.zeros((dim, dim))
    occ = (s[:, None] >> np.arange(L)) & 1
    diag = occ @ potential
    bonds = chain_bonds(L, pbc)
    for a, b in bonds:
        diag = diag + U * occ[:, a] * occ[:, b]
    h[np.arange(dim), np.arange(dim)] = diag
    if J != 0:
        for a, b in bonds:
            lo, hi = min(a, b), max(a, b)
            # c_lo^dag c_hi + c_hi^dag c_lo, both move one particle across the bond
            src = np.flatnonzero(((s >> lo) & 1) != ((s >> hi) & 1))
            tgt = basis.index(s[src] ^ ((1 << lo) | (1 << hi)))
            h[tgt, src] += J * _jw_sign(s[src], lo, hi)
    return h


@dataclass
class SectorHamiltonian:
    """Interacting AA chain with decoupled ancillas; blocks diagonalized lazily.

    ``blocks[n]`` holds the system-only matrix with ``n`` particles and its
    eigendecomposition.  Any state on ``L + n_ancilla`` modes can be evolved.
    """

    L: int
    J: float
    U: float
    w: float
    theta: float
    pbc: bool
    n_ancilla: int = 0
    alpha: float = ALPHA
    _blocks: dict = field(default_factory=dict, repr=False)

    @cached_property
    def potential(self) -> np.ndarray:
        j = np.arange(1, self.L + 1)
        return 2 * self.w * np.cos(2 * np.pi * self.alpha * j + self.theta)

    @property
    def n_sites(self) -> int:
        return self.L + self.n_ancilla

    def system_matrix(self, n: int) -> np.ndarray:
        return self._block(n)[0]

    def _block(self, n: int):
        if n not in self._blocks:
            h = _system_matrix(self.L, n, self.J, self.U, self.potential, self.pbc)
            e, v = np.linalg.eigh(h)
            self._blocks[n] = (h, e, v)
        return self._blocks[n]

    def eigenvalues(self, n: int) -> np.ndarray:
        """Spectrum of the system-only sector with ``n`` particles."""
        if n in self._blocks:
            return self._blocks[n][1]
        # eigenvalues alone are several times cheaper than the full decomposition
        key = ("values", n)
        if key not in self._blocks:
            h = _system_matrix(self.L, n, self.J, self.U, self.potential, self.pbc)
            self._blocks[key] = np.linalg.eigvalsh(h)
        return self._blocks[key]

    def matrix(self, n_particles: int) -> np.ndarray:
        """Dense matrix on the full sector (system plus ancillas), basis order."""
        basis = sector_basis(self.n_sites, n_particles)
        h = np.zeros((len(basis), len(basis)))
        for idx, n_sys in _ancilla_groups(basis, self.L):
            h[np.ix_(idx, idx)] = self.system_matrix(n_sys)
        return h

    def spectrum(self, n_particles: int) -> np.ndarray:
        basis = sector_basis(self.n_sites, n_particles)
        return np.sort(np.concatenate([self.eigenvalues(n) for _, n in _ancilla_groups(basis, self.L)]))

    def evolve(self, state: SectorState, t: float) -> SectorState:
        if state.n_sites != self.n_sites:
            raise ValueError("state and Hamiltonian have different mode counts")
        out = np.empty_like(state.amplitudes)
        for idx, n_sys in _ancilla_groups(state.basis, self.L):
            _, e, v = self._block(n_sys)
            psi = state.amplitudes[idx]
            out[idx] = v @ (np.exp(-1j * e * t) * (v.T @ psi))
        return SectorState(state.basis, out)

    def energy(self, state: SectorState) -> float:
        total = 0.0
        for idx, n_sys in _ancilla_groups(state.basis, self.L):
            psi = state.amplitudes[idx]
            total += float(np.real(psi.conj() @ (self.system_matrix(n_sys) @ psi)))
        return total


def _ancilla_groups(basis: SectorBasis, L: int):
    """Index sets sharing one ancilla configuration, with their system particle number.

    Ancillas occupy the high bits, so each group is a contiguous run whose
    system parts are in system-sector order.
    """
    high = basis.states >> L
    if len(high) == 0:
        return []
    cuts = np.flatnonzero(np.diff(high)) + 1
    starts = np.concatenate([[0], cuts])
    ends = np.concatenate([cuts, [len(high)]])
    groups = []
    for a, b in zip(starts, ends):
        n_sys = basis.n_particles - int(popcount(high[a]))
        groups.append((np.arange(a, b), n_sys))
    return groups


def build_interacting_aa(L: int, J: float = 1.0, U: float = 0.0, w: float = 0.0,
                         theta: float = 0.0, pbc: bool = True, with_ancilla: bool | int = False,
                         alpha: float = ALPHA) -> SectorHamiltonian:
    """Interacting AA Hamiltonian J sum(c+_{j+1} c_j + h.c.) + sum V_j n_j + U sum n_j n_{j+1}."""
    if L < 2 or L > 16:
        raise ValueError("dense backend supports 2 <= L <= 16")
    n_anc = int(with_ancilla)
    largest = comb(L, L // 2)
    if largest > MAX_SECTOR_DIM:
        raise MemoryError(f"half-filled sector of dimension {largest} exceeds the budget")
    return SectorHamiltonian(L, J, U, w, theta, pbc, n_anc, alpha)


def neel_bell_state(L: int, e_position: int, n_ancilla: int = 1) -> SectorState:
    """Neel system (odd sites filled) Bell-paired with the reference mode ``L``.

    The reference starts filled iff site E is empty; the pair is then rotated
    by exp(-i pi/4 (c_E^dag c_R + h.c.)).
    """
    if L % 2:
        raise ValueError("Neel state needs even L")
    if not 0 <= e_position < L:
        raise ValueError("e_position out of range")
    r = L
    mask = sum(1 << i for i in range(1, L, 2))
    if not (mask >> e_position) & 1:
        mask |= 1 << r
    st = SectorState.from_mask(L + n_ancilla, mask)
    return pair_rotation(st, e_position, r, np.pi / 4)


def pair_rotation(state: SectorState, a: int, b: int, angle: float) -> SectorState:
    """exp(-i angle (c_a^dag c_b + c_b^dag c_a)) applied to ``state``."""
    # on the relevant two-mode space the generator squares to a projector
    k1 = SectorState(state.basis, hop(state, a, b).amplitudes + hop(state, b, a).amplitudes)
    k2 = SectorState(state.basis, hop(k1, a, b).amplitudes + hop(k1, b, a).amplitudes)
    amp = state.amplitudes + (np.cos(angle) - 1) * k2.amplitudes - 1j * np.sin(angle) * k1.amplitudes
    return SectorState(state.basis, amp)


def evolve(state: SectorState, H: SectorHamiltonian, t: float) -> SectorState:
    return H.evolve(state, t)


# -- reduced density matrices -------------------------------------------------

def _split(states: np.ndarray, region: np.ndarray, n_sites: int):
    """Row/column labels and the fermionic reordering sign for bringing ``region`` first."""
    region = np.asarray(region, dtype=np.int64)
    comp = np.setdiff1d(np.arange(n_sites), region)
    a_idx = np.zeros(len(states), dtype=np.int64)
    for k, site in enumerate(region):
        a_idx |= ((states >> site) & 1) << k
    b_idx = np.zeros(len(states), dtype=np.int64)
    for k, site in enumerate(comp):
        b_idx |= ((states >> site) & 1) << k
    comp_mask = sum(1 << int(c) for c in comp)
    parity = np.zeros(len(states), dtype=np.int64)
    for site in region:
        below = comp_mask & ((1 << int(site)) - 1)
        parity ^= ((states >> site) & 1) * (popcount(states & below) & 1)
    return a_idx, b_idx, 1 - 2 * parity, comp


def schmidt_matrix(state: SectorState, region) -> np.ndarray:
    """M with rho_region = M M^dag, rows over region occupations (ascending bit order)."""
    region = np.asarray(sorted(set(int(r) for r in np.atleast_1d(region))), dtype=np.int64)
    if region.size and (region.min() < 0 or region.max() >= state.n_sites):
        raise IndexError("region out of range")
    a_idx, b_idx, sign, comp = _split(state.basis.states, region, state.n_sites)
    m = np.zeros((1 << region.size, 1 << comp.size), dtype=complex)
    m[a_idx, b_idx] = sign * state.amplitudes
    return m


def reduced_density_matrix(state: SectorState, region) -> np.ndarray:
    m = schmidt_matrix(state, region)
    return m @ m.conj().T


def entropy_from_spectrum(p) -> float:
    p = np.clip(np.real(np.asarray(p)), 0.0, None)
    p = p[p > NU_CLAMP]
    return float(-(p * np.log2(p)).sum())


def rdm_entropy(state: SectorState, region) -> float:
    """Von Neumann entropy (bits) of an arbitrary set of modes."""
    region = np.atleast_1d(np.asarray(region, dtype=np.int64))
    if region.size == 0 or region.size == state.n_sites:
        return 0.0
    m = schmidt_matrix(state, region)
    sv = np.linalg.svd(m, compute_uv=False)
    return entropy_from_spectrum(sv ** 2)


def renyi2_entropy(state: SectorState, region) -> float:
    rho = reduced_density_matrix(state, region)
    return float(-np.log2(np.real(np.trace(rho @ rho))))


def mutual_information(state: SectorState, a, r) -> float:
    a = np.atleast_1d(np.asarray(a, dtype=np.int64))
    r = np.atleast_1d(np.asarray(r, dtype=np.int64))
    if np.intersect1d(a, r).size:
        raise ValueError("regions overlap")
    return rdm_entropy(state, a) + rdm_entropy(state, r) - rdm_entropy(state, np.concatenate([a, r]))


def von_neumann(rho: np.ndarray) -> float:
    return entropy_from_spectrum(np.linalg.eigvalsh(rho))


def holevo(H: SectorHamiltonian, psi1: SectorState, psi2: SectorState, region, t: float) -> float:
    """Holevo quantity of the equal mixture of the two evolved states seen on ``region``."""
    if psi1.n_sites != psi2.n_sites:
        raise ValueError("states live on different mode sets")
    region = np.atleast_1d(np.asarray(region, dtype=np.int64))
    if region.size > 12:
        raise ValueError("Holevo region too large for explicit density matrices")
    r1 = reduced_density_matrix(H.evolve(psi1, t), region)
    r2 = reduced_density_matrix(H.evolve(psi2, t), region)
    chi = von_neumann((r1 + r2) / 2) - (von_neumann(r1) + von_neumann(r2)) / 2
    return float(min(max(chi, 0.0), 1.0))


def flip_site(state: SectorState, site: int) -> SectorState:
    """(c_site + c_site^dag) |state> for a state with definite occupation of ``site``."""
    s = state.basis.states
    occ = (s >> site) & 1
    nz = np.abs(state.amplitudes) > 0
    if len(set(occ[nz].tolist())) != 1:
        raise ValueError("site occupation is not definite")
    filled = bool(occ[nz][0])
    n_new = state.basis.n_particles + (-1 if filled else 1)
    nb = sector_basis(state.n_sites, n_new)
    sign = 1 - 2 * (popcount(s & ((1 << site) - 1)) & 1)
    amp = np.zeros(len(nb), dtype=complex)
    tgt = nb.index(s[nz] ^ (1 << site))
    amp[tgt] = sign[nz] * state.amplitudes[nz]
    return SectorState(nb, amp)


# -- spectral statistics -------------------------------------------------------

@dataclass(frozen=True)
class SpacingStats:
    r_mean: float
    n_ratios: int
    n_degenerate: int

    @property
    def degenerate(self) -> bool:
        return self.n_degenerate > 0


def level_spacing_stats(energies, keep: float = 0.8) -> SpacingStats:
    """Mean min/max ratio of consecutive gaps over the central ``keep`` fraction of levels.

    A ratio with both gaps zero counts as 0 and is reported in ``n_degenerate``.
    """
    if isinstance(energies, SectorHamiltonian):
        energies = energies.eigenvalues(energies.L // 2)
    e = np.sort(np.asarray(energies, dtype=float))
    n = e.size
    drop = int(round(n * (1 - keep) / 2))
    e = e[drop: n - drop] if drop else e
    d = np.diff(e)
    if d.size < 2:
        raise ValueError("need at least three levels")
    lo = np.minimum(d[:-1], d[1:])
    hi = np.maximum(d[:-1], d[1:])
    zero = hi <= 0
    ratio = np.where(zero, 0.0, lo / np.where(zero, 1.0, hi))
    return SpacingStats(float(ratio.mean()), int(ratio.size), int(zero.sum()))


def level_spacing_ratio(energies, keep: float = 0.8) -> float:
    return level_spacing_stats(energies, keep).r_mean


def mbl_time_grid(t_max: float = 1e6, points_per_decade: int = 10) -> np.ndarray:
    """dt = 1 below t = 10, then logarithmically spaced up to ``t_max``."""
    early = np.arange(0.0, 10.0)
    decades = np.log10(t_max) - 1
    late = np.logspace(1, np.log10(t_max), int(round(decades * points_per_decade)) + 1)
    return np.concatenate([early, late])
