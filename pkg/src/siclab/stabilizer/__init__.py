"""Stabilizer (Clifford) simulation: tableau, gates, Z-measurements, entropies."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .clifford2 import (
    N_CLIFFORD2,
    CliffordTable,
    clifford_table,
    gate_unitary,
    sample_clifford2,
)
from .tableau import StabilizerTableau, gf2_rank

Scheme = Literal["one_to_one", "one_to_all", "many_to_many"]
SCHEMES = ("one_to_one", "one_to_all", "many_to_many")

__all__ = [
    "N_CLIFFORD2",
    "CliffordTable",
    "Region",
    "SCHEMES",
    "StabilizerTableau",
    "apply_gate",
    "clifford_table",
    "default_e_sites",
    "entropy",
    "gate_unitary",
    "gf2_rank",
    "init_encoded",
    "measure_z",
    "mutual_information",
    "n_references",
    "sample_clifford2",
]


@dataclass(frozen=True)
class Region:
    """An ordered set of qubit indices tagged as system or reference."""

    sites: tuple[int, ...]
    role: Literal["system", "reference"] = "system"

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if len(set(sites)) != len(sites):
            raise ValueError("region sites must be unique")
        if any(s < 0 for s in sites):
            raise ValueError("region sites must be non-negative")
        object.__setattr__(self, "sites", sites)

    def __len__(self) -> int:
        return len(self.sites)

    def array(self) -> np.ndarray:
        return np.asarray(self.sites, dtype=np.int64)


def _sites(region) -> np.ndarray:
    if isinstance(region, Region):
        return region.array()
    return np.asarray(list(region) if not isinstance(region, np.ndarray) else region,
                      dtype=np.int64).reshape(-1)


def n_references(L: int, scheme: str) -> int:
    if scheme == "many_to_many":
        return L // 2
    if scheme in ("one_to_one", "one_to_all"):
        return 1
    raise ValueError(f"unknown encoding scheme {scheme!r}")


def default_e_sites(L: int, scheme: str) -> np.ndarray:
    """Entangled system sites used when no placement is given."""
    if scheme == "one_to_one":
        return np.array([L // 2])
    if scheme == "many_to_many":
        half = L // 2
        start = (L - half) // 2
        return np.arange(start, start + half)
    if scheme == "one_to_all":
        return np.arange(L)
    raise ValueError(f"unknown encoding scheme {scheme!r}")


def init_encoded(L: int, scheme: str, e_position=None) -> StabilizerTableau:
    """Encoded initial state on ``L`` system qubits plus the references.

    References are indexed ``L, L+1, ...``.  ``one_to_one`` puts a Bell pair
    on (E, R); ``many_to_many`` pairs the ``L/2`` sites of E one-to-one with
    ``L/2`` references; ``one_to_all`` prepares the (L+1)-qubit GHZ state.
    All other system qubits start in ``|0>``.
    """
    if L < 1:
        raise ValueError("L must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown encoding scheme {scheme!r}")
    if scheme == "many_to_many" and L % 2:
        raise ValueError("many_to_many needs even L")
    if e_position is None:
        e = default_e_sites(L, scheme)
    else:
        e = np.atleast_1d(np.asarray(e_position, dtype=np.int64))
    if e.size and (e.min() < 0 or e.max() >= L):
        raise ValueError("e_position out of range")
    if len(np.unique(e)) != e.size:
        raise ValueError("e_position has repeated sites")

    n_ref = n_references(L, scheme)
    tab = StabilizerTableau(L + n_ref)
    if scheme == "one_to_one":
        if e.size != 1:
            raise ValueError("one_to_one needs exactly one e_position")
        tab.h(int(e[0]))
        tab.cnot(int(e[0]), L)
    elif scheme == "many_to_many":
        if e.size != n_ref:
            raise ValueError(f"many_to_many needs {n_ref} entangled sites")
        for k, q in enumerate(e):
            tab.h(int(q))
            tab.cnot(int(q), L + k)
    else:
        if e_position is not None and e.size != L:
            raise ValueError("one_to_all entangles every system site")
        tab.h(0)
        for q in range(1, L + 1):
            tab.cnot(0, q)
    return tab


def apply_gate(state: StabilizerTableau, gate_id: int, q1: int, q2: int) -> StabilizerTableau:
    state.apply_gate(int(gate_id), int(q1), int(q2))
    return state


def measure_z(state: StabilizerTableau, q: int, rng: np.random.Generator) -> tuple[int, StabilizerTableau]:
    """Z-measure qubit ``q``; a coin is always drawn from ``rng`` so streams stay aligned."""
    coin = int(rng.integers(0, 2))
    outcome, _ = state.measure_z(int(q), coin)
    return outcome, state


def entropy(state: StabilizerTableau, region) -> int:
    return state.entropy(_sites(region))


def mutual_information(state: StabilizerTableau, a, r) -> int:
    return state.mutual_information(_sites(a), _sites(r))


def regions_disjoint(*regions: Iterable[int]) -> bool:
    seen: set[int] = set()
    for reg in regions:
        s = set(int(i) for i in _sites(reg))
        if seen & s:
            return False
        seen |= s
    return True
