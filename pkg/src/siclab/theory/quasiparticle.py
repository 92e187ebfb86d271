"""Quasiparticle picture for free-fermion quenches.

A quasiparticle of momentum k leaves E ballistically with velocity v(k);
I(A:R) is twice the entropy-weighted fraction of momenta still inside A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..gaussian import ModelParams, binary_entropy_bits, build_ssh

MIN_GRID = 1024


@dataclass(frozen=True)
class QuasiparticleSpec:
    k: np.ndarray
    energy: np.ndarray
    velocity: np.ndarray
    occupation: np.ndarray
    boundary: str = "periodic"

    def __post_init__(self):
        if self.k.size < MIN_GRID:
            raise ValueError(f"k-grid needs at least {MIN_GRID} points")
        if self.boundary not in ("periodic", "reflecting"):
            raise ValueError("boundary must be 'periodic' or 'reflecting'")
        if np.any((self.occupation < 0) | (self.occupation > 1)):
            raise ValueError("occupations must lie in [0, 1]")

    @property
    def weights(self) -> np.ndarray:
        return binary_entropy_bits(self.occupation)

    @property
    def v_max(self) -> float:
        return float(np.abs(self.velocity).max())


def k_grid(n: int = 4096) -> np.ndarray:
    """Midpoint grid on [-pi, pi)."""
    return -np.pi + (np.arange(n) + 0.5) * (2 * np.pi / n)


def tight_binding(J: float = 1.0, n: int = 4096, boundary: str = "periodic") -> QuasiparticleSpec:
    """Uniform hopping chain quenched from the Neel state (n_k = 1/2)."""
    k = k_grid(n)
    return QuasiparticleSpec(k, 2 * J * np.cos(k), -2 * J * np.sin(k), np.full(n, 0.5), boundary)


def ssh_dispersion(delta: float, n: int = 4096, boundary: str = "reflecting") -> QuasiparticleSpec:
    """SSH band 2 sqrt(cos^2 k + delta^2 sin^2 k) and its exact group velocity."""
    if abs(delta) >= 1:
        raise ValueError("|delta| must be < 1")
    k = k_grid(n)
    root = np.sqrt(np.cos(k) ** 2 + delta ** 2 * np.sin(k) ** 2)
    energy = 2 * root
    velocity = 2 * (delta ** 2 - 1) * np.sin(k) * np.cos(k) / root
    return QuasiparticleSpec(k, energy, velocity, np.full(n, 0.5), boundary)


def ssh_vmax(delta: float) -> float:
    return 2.0 * (1.0 - abs(delta))


def _fold(x, L, boundary):
    if boundary == "periodic":
        return np.mod(x, L)
    # mirror images at 0 and L: period 2L
    y = np.mod(x, 2 * L)
    return np.where(y > L, 2 * L - y, y)


def quasiparticle_mi(L: float, L_A: float, t, spec: QuasiparticleSpec, placement: str = "center"):
    """Predicted I(A:R) for E at the centre of A ('center') or at site 0 with A = [0, L_A] ('boundary')."""
    if placement not in ("center", "boundary"):
        raise ValueError("placement must be 'center' or 'boundary'")
    if not 0 <= L_A <= L:
        raise ValueError("need 0 <= L_A <= L")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    w = spec.weights
    total = w.sum()
    out = np.empty(t_arr.shape)
    if placement == "center":
        x0, lo, hi = L / 2, L / 2 - L_A / 2, L / 2 + L_A / 2
    else:
        x0, lo, hi = 0.0, 0.0, float(L_A)
    for i, ti in enumerate(t_arr):
        x = _fold(x0 + spec.velocity * ti, L, spec.boundary)
        inside = (x >= lo) & (x <= hi)
        out[i] = 2 * (w * inside).sum() / total
    return float(out[0]) if np.ndim(t) == 0 else out


def xi_loc(delta: float) -> float:
    return 2.0 / np.log((1 - delta) / (1 + delta))


def ssh_edge_profile(delta: float, L: int) -> tuple[float, float]:
    """(localization length, weight of the left edge mode on the boundary site).

    The two near-zero modes of an open chain are bonding/antibonding mixtures
    of the left and right edge states, so their boundary weights are summed.
    """
    if delta >= 0:
        raise ValueError("edge modes need delta < 0")
    if delta <= -1:
        raise ValueError("need delta > -1")
    h = build_ssh(ModelParams(delta=delta, boundary="open"), L).h
    e, v = np.linalg.eigh(h)
    zero = np.argsort(np.abs(e))[:2]
    density = float((np.abs(v[0, zero]) ** 2).sum())
    return xi_loc(delta), density


def edge_trapped_mi(edge_density: float) -> float:
    """I(A:R) when A holds the edge mode but none of the bulk.

    The Bell-encoded particle is split between R (weight 1/2), the edge mode
    (p/2) and the bulk ((1-p)/2), giving 1 + h(p/2) - h((1-p)/2).
    """
    p = float(edge_density)
    h = lambda x: float(binary_entropy_bits(x))
    return 1.0 + h(p / 2) - h((1 - p) / 2)
