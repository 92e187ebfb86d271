"""Entanglement-membrane predictions for random Clifford/Haar brickwall circuits.

Speeds are in sites per double layer (one odd plus one even half-layer);
the line tension itself is defined per half-layer, hence the factors of 2.
"""

from __future__ import annotations

import numpy as np


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log(safe), 0.0)


def line_tension(v, d: int = 2):
    """Membrane line tension E(v) for Haar-like two-qudit gates (per half-layer).

    E(v) = log_d((d^2+1)/d) + ((1+v)/2) log_d((1+v)/2) + ((1-v)/2) log_d((1-v)/2)
    """
    if d < 2:
        raise ValueError("local dimension must be >= 2")
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) > 1):
        raise ValueError("|v| must not exceed 1")
    out = (np.log((d * d + 1) / d) + _xlogx((1 + v) / 2) + _xlogx((1 - v) / 2)) / np.log(d)
    return float(out) if out.ndim == 0 else out


def line_tension_slope(v, d: int = 2):
    v = np.asarray(v, dtype=float)
    return 0.5 * np.log((1 + v) / (1 - v)) / np.log(d)


def v_entanglement(d: int = 2) -> float:
    """Entanglement velocity 2 E(0) in sites per double layer."""
    return 2.0 * line_tension(0.0, d)


def v_butterfly(d: int = 2) -> float:
    """Butterfly velocity 2 (d^2-1)/(d^2+1) in sites per double layer."""
    return 2.0 * (d * d - 1) / (d * d + 1)


def drop_time(l_a: float, d: int = 2) -> float:
    return l_a / (2.0 * v_entanglement(d))


def predict_one_to_one(L: int, L_A: int, t, d: int = 2):
    """Bell pair at the centre of A: 2 until L_A/(2 v_E), then 0, 1 or 2 for L_A <, =, > L/2."""
    if not 1 <= L_A <= L:
        raise ValueError("need 1 <= L_A <= L")
    t = np.asarray(t, dtype=float)
    if 2 * L_A < L:
        late = 0.0
    elif 2 * L_A == L:
        late = 1.0
    else:
        late = 2.0
    out = np.where(t < drop_time(L_A, d), 2.0, late)
    return float(out) if out.ndim == 0 else out


def predict_one_to_all(L: int, L_A: int, t, d: int = 2):
    """GHZ encoding: 1 initially, then 0 (L_A < L/2) or 2 (L_A > L/2).

    The switch happens when the smaller of A and its complement is covered by
    the membrane, at min(L_A, L - L_A)/(2 v_E); this keeps
    I(A:R) + I(Abar:R) = 2 at all times.
    """
    if not 0 < L_A <= L:
        raise ValueError("need 0 < L_A <= L")
    t = np.asarray(t, dtype=float)
    if L_A == L:
        out = np.full_like(t, 2.0)
    elif 2 * L_A == L:
        out = np.ones_like(t)
    else:
        late = 0.0 if 2 * L_A < L else 2.0
        out = np.where(t < drop_time(min(L_A, L - L_A), d), 1.0, late)
    return float(out) if out.ndim == 0 else out


def many_to_many_steady(L: int, L_A: int) -> float:
    return float(max(0.0, min(2.0, 4.0 * L_A / L - 1.0)))


def predict_many_to_many(L: int, L_A: int, t, d: int = 2):
    """L/2 Bell pairs on the central block E inside A; MI normalized by L/2.

    2 until (L_A - L/2)/(2 v_E), then (L/2 + L_A - 2 v_E t)/(L/2) until
    (L - L_A)/(2 v_E), then the steady value max(0, min(2, 4 L_A/L - 1)).
    """
    if not L / 2 <= L_A <= L:
        raise ValueError("A must contain all of E (L/2 <= L_A <= L)")
    t = np.asarray(t, dtype=float)
    linear = (L / 2 + L_A - v_entanglement(d) * 2 * t) / (L / 2)
    out = np.maximum(many_to_many_steady(L, L_A), np.minimum(2.0, linear))
    return float(out) if out.ndim == 0 else out


def many_to_many_breakpoints(L: int, L_A: int, d: int = 2) -> tuple[float, float]:
    ve = v_entanglement(d)
    return (L_A - L / 2) / (2 * ve), (L - L_A) / (2 * ve)
