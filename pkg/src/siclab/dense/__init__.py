"""Exact state-vector engines: fixed-N fermion chains and small qubit registers."""

from .oracles import (
    holevo_equality_check,
    otoc_identity_check,
    pfaffian,
    wick_violation_check,
    xx_hamiltonian,
)
from .qubits import QubitState, circuit_unitary, embed, pauli_string
from .sector import (
    SectorBasis,
    SectorHamiltonian,
    SectorState,
    SpacingStats,
    build_interacting_aa,
    correlation_matrix,
    evolve,
    flip_site,
    holevo,
    level_spacing_ratio,
    level_spacing_stats,
    mbl_time_grid,
    mutual_information,
    neel_bell_state,
    pair_rotation,
    rdm_entropy,
    reduced_density_matrix,
    renyi2_entropy,
    sector_basis,
)

__all__ = [
    "QubitState",
    "SectorBasis",
    "SectorHamiltonian",
    "SectorState",
    "SpacingStats",
    "build_interacting_aa",
    "circuit_unitary",
    "correlation_matrix",
    "embed",
    "evolve",
    "flip_site",
    "holevo",
    "holevo_equality_check",
    "level_spacing_ratio",
    "level_spacing_stats",
    "mbl_time_grid",
    "mutual_information",
    "neel_bell_state",
    "otoc_identity_check",
    "pair_rotation",
    "pauli_string",
    "pfaffian",
    "rdm_entropy",
    "reduced_density_matrix",
    "renyi2_entropy",
    "sector_basis",
    "wick_violation_check",
    "xx_hamiltonian",
]
