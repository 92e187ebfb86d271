"""Brickwall random Clifford circuits with mid-circuit Z measurements.

One time unit is an odd half-layer (pairs (0,1),(2,3),...) followed by an
even half-layer (pairs (1,2),(3,4),..., plus (L-1,0) when periodic).  After
each half-layer every system site is measured with probability ``p_m``.

Random numbers are consumed in a fixed order per half-layer: the gate ids
left to right, then (only when ``p_m > 0``) one uniform per system site in
ascending order deciding which sites are measured, then one coin per
measured site.  Floquet circuits draw their two gate lists once at t=0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .series import SICSeries
from .stabilizer import (
    N_CLIFFORD2,
    SCHEMES,
    StabilizerTableau,
    default_e_sites,
    init_encoded,
    n_references,
)


@dataclass(frozen=True)
class CircuitSpec:
    L: int
    periodic: bool = True
    p_m: float = 0.0
    floquet: bool = False
    depth: int = 0
    scheme: str = "one_to_one"
    e_sites: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError("L must be even and at least 2")
        if not 0.0 <= self.p_m <= 1.0:
            raise ValueError("p_m must lie in [0, 1]")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown encoding scheme {self.scheme!r}")
        if self.floquet and self.p_m > 0:
            raise ValueError("Floquet circuits run without measurements (p_m = 0)")
        if self.e_sites is not None:
            object.__setattr__(self, "e_sites", tuple(int(e) for e in self.e_sites))

    @property
    def n_ref(self) -> int:
        return n_references(self.L, self.scheme)

    @property
    def entangled_sites(self) -> np.ndarray:
        if self.e_sites is None:
            return default_e_sites(self.L, self.scheme)
        return np.asarray(self.e_sites, dtype=np.int64)

    @property
    def center(self) -> int:
        """Site on which regions A are centred."""
        e = self.entangled_sites
        if self.scheme == "one_to_one":
            return int(e[0])
        return self.L // 2

    @property
    def mi_scale(self) -> float:
        """Divisor that maps raw MI onto the 0..2 scale."""
        return self.L / 2 if self.scheme == "many_to_many" else 1.0


@dataclass(frozen=True)
class RegionSchedule:
    l_a: tuple[int, ...]
    times: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "l_a", tuple(int(x) for x in self.l_a))
        object.__setattr__(self, "times", tuple(int(t) for t in self.times))
        if not self.l_a or not self.times:
            raise ValueError("schedule needs at least one L_A and one time")
        if any(np.diff(self.times) < 0):
            raise ValueError("times must be non-decreasing")
        if min(self.times) < 0:
            raise ValueError("times must be non-negative")


@dataclass
class LayerGates:
    """Gate ids of the odd and even half-layers of one time step."""

    odd: np.ndarray
    even: np.ndarray
    measured: list = field(default_factory=list)


def brickwall_pairs(L: int, periodic: bool):
    odd = np.arange(0, L - 1, 2)
    odd_pairs = (odd, odd + 1)
    even = np.arange(1, L - 1, 2)
    e1, e2 = even, even + 1
    if periodic and L > 2:
        e1 = np.append(e1, L - 1)
        e2 = np.append(e2, 0)
    return odd_pairs, (e1.astype(np.int64), e2.astype(np.int64))


def region_sites(L: int, l_a: int, center: int, periodic: bool) -> np.ndarray:
    """Contiguous block of ``l_a`` sites centred on ``center``.

    For even ``l_a`` the extra site goes to the left.  With open boundaries
    the block is shifted to fit inside the chain.
    """
    if not 0 < l_a <= L:
        raise ValueError(f"L_A={l_a} outside (0, {L}]")
    start = center - l_a // 2
    if periodic:
        return np.sort((start + np.arange(l_a)) % L)
    start = min(max(start, 0), L - l_a)
    return np.arange(start, start + l_a)


def _half_layer(state, rng, spec, pairs, gate_ids, record):
    q1, q2 = pairs
    if gate_ids is None:
        gate_ids = rng.integers(0, N_CLIFFORD2, size=q1.size)
    state.apply_gates(gate_ids, q1, q2)
    if spec.p_m > 0:
        chosen = np.flatnonzero(rng.random(spec.L) < spec.p_m)
        coins = rng.integers(0, 2, size=chosen.size)
        for q, c in zip(chosen, coins):
            state.measure_z(int(q), int(c))
        record.append(chosen)
    return gate_ids


def step(state: StabilizerTableau, spec: CircuitSpec, rng: np.random.Generator,
         t_index: int, gates: LayerGates | None = None) -> LayerGates:
    """Advance ``state`` by one double layer in place and return the gates used.

    For Floquet circuits pass the gates returned at ``t_index == 0`` on every
    later call; they are replayed verbatim.
    """
    odd_pairs, even_pairs = brickwall_pairs(spec.L, spec.periodic)
    if spec.floquet and t_index > 0 and gates is None:
        raise ValueError("Floquet steps after t=0 need the t=0 gates")
    if not spec.floquet:
        gates = None
    measured: list = []
    odd = _half_layer(state, rng, spec, odd_pairs, None if gates is None else gates.odd, measured)
    even = _half_layer(state, rng, spec, even_pairs, None if gates is None else gates.even, measured)
    return LayerGates(odd, even, measured)


class _Observer:
    """Precomputed regions for MI(L_A) = S_A + S_R - S_AR."""

    def __init__(self, spec: CircuitSpec, l_a: Sequence[int]):
        L = spec.L
        ref = np.arange(L, L + spec.n_ref)
        regions = [ref]
        for la in l_a:
            a = region_sites(L, la, spec.center, spec.periodic)
            if spec.scheme == "many_to_many" and not np.isin(spec.entangled_sites, a).all():
                raise ValueError(f"L_A={la} does not contain all of E")
            regions.append(a)
            regions.append(np.concatenate([a, ref]))
        self.regions = regions
        self.scale = spec.mi_scale

    def __call__(self, state: StabilizerTableau) -> np.ndarray:
        s = state.entropies(self.regions)
        s_r = s[0]
        return (s[1::2] + s_r - s[2::2]) / self.scale


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def run_trajectory(spec: CircuitSpec, schedule: RegionSchedule, seed) -> SICSeries:
    """One realization: MI at every scheduled (t, L_A) from a single evolving state."""
    if max(schedule.times) > spec.depth:
        raise ValueError("schedule times exceed circuit depth")
    rng = _as_rng(seed)
    state = init_encoded(spec.L, spec.scheme, spec.e_sites)
    observe = _Observer(spec, schedule.l_a)
    times = np.asarray(schedule.times)
    out = np.zeros((times.size, len(schedule.l_a)))
    gates = None
    k = 0
    t = 0
    while k < times.size:
        while k < times.size and times[k] == t:
            out[k] = observe(state)
            k += 1
        if k == times.size:
            break
        used = step(state, spec, rng, t, gates)
        if spec.floquet and gates is None:
            gates = used
        t += 1
    return SICSeries(times, schedule.l_a, out, np.zeros_like(out), 1,
                     {"backend": "clifford"})


def default_window(spec: CircuitSpec) -> tuple[int, int]:
    """Late-time averaging window: [L, 2L], or [2L, 4L] for Floquet circuits."""
    return (2 * spec.L, 4 * spec.L) if spec.floquet else (spec.L, 2 * spec.L)


def steady_sweep(spec: CircuitSpec, l_a_list: Sequence[int], t_window=None,
                 seed=None, stride: int = 1) -> np.ndarray:
    """Time-averaged MI over ``t_window`` (inclusive) for each L_A, one realization."""
    lo, hi = default_window(spec) if t_window is None else t_window
    if lo < 0 or hi < lo:
        raise ValueError("invalid averaging window")
    if hi > spec.depth:
        raise ValueError("window exceeds circuit depth")
    times = tuple(range(int(lo), int(hi) + 1, max(1, int(stride))))
    series = run_trajectory(spec, RegionSchedule(tuple(l_a_list), times), seed)
    return series.mean.mean(axis=0)
