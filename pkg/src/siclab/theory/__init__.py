"""Closed-form predictors: membrane curves and the quasiparticle picture."""

from .membrane import (
    drop_time,
    line_tension,
    line_tension_slope,
    many_to_many_breakpoints,
    many_to_many_steady,
    predict_many_to_many,
    predict_one_to_all,
    predict_one_to_one,
    v_butterfly,
    v_entanglement,
)
from .quasiparticle import (
    QuasiparticleSpec,
    edge_trapped_mi,
    k_grid,
    quasiparticle_mi,
    ssh_dispersion,
    ssh_edge_profile,
    ssh_vmax,
    tight_binding,
    xi_loc,
)

__all__ = [
    "QuasiparticleSpec",
    "drop_time",
    "edge_trapped_mi",
    "k_grid",
    "line_tension",
    "line_tension_slope",
    "many_to_many_breakpoints",
    "many_to_many_steady",
    "predict_many_to_many",
    "predict_one_to_all",
    "predict_one_to_one",
    "quasiparticle_mi",
    "ssh_dispersion",
    "ssh_edge_profile",
    "ssh_vmax",
    "tight_binding",
    "v_butterfly",
    "v_entanglement",
    "xi_loc",
]
