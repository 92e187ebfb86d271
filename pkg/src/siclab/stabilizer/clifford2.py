"""Enumeration of the two-qubit Clifford group.

Every element is stored as a short program over the elementary gates
``H``, ``S`` and ``CNOT`` so that the word-parallel tableau kernels can
apply it.  Elements are identified by their signed action on the Pauli
generators ``X0, Z0, X1, Z1``; the group (modulo global phase) has
exactly 11520 such actions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

N_CLIFFORD2 = 11520

# elementary op codes; "a" is the first qubit of the pair, "b" the second
OP_H_A, OP_H_B, OP_S_A, OP_S_B, OP_CX_AB, OP_CX_BA = range(6)
OP_NAMES = ("H_a", "H_b", "S_a", "S_b", "CX_ab", "CX_ba")

# rows of the identity action: (x_a, z_a, x_b, z_b, r) for X_a, Z_a, X_b, Z_b
_IDENTITY = (
    (1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 1, 0, 0),
    (0, 0, 0, 1, 0),
)


def _h(x, z, r):
    return z, x, r ^ (x & z)


def _s(x, z, r):
    return x, z ^ x, r ^ (x & z)


def _apply_op(rows, op):
    out = []
    for xa, za, xb, zb, r in rows:
        if op == OP_H_A:
            xa, za, r = _h(xa, za, r)
        elif op == OP_H_B:
            xb, zb, r = _h(xb, zb, r)
        elif op == OP_S_A:
            xa, za, r = _s(xa, za, r)
        elif op == OP_S_B:
            xb, zb, r = _s(xb, zb, r)
        elif op == OP_CX_AB:
            r ^= xa & zb & (xb ^ za ^ 1)
            xb ^= xa
            za ^= zb
        else:
            r ^= xb & za & (xa ^ zb ^ 1)
            xa ^= xb
            zb ^= za
        out.append((xa, za, xb, zb, r))
    return tuple(out)


@dataclass(frozen=True)
class CliffordTable:
    """All 11520 two-qubit Cliffords in canonical order.

    ``programs[g, :lengths[g]]`` is the op sequence of gate ``g`` (first op
    applied first).  ``actions[g]`` is the 4x5 signed Heisenberg image of
    ``X_a, Z_a, X_b, Z_b``.
    """

    programs: np.ndarray
    lengths: np.ndarray
    actions: np.ndarray

    def __len__(self) -> int:
        return len(self.lengths)

    def program(self, gate_id: int) -> list[int]:
        return [int(o) for o in self.programs[gate_id, : self.lengths[gate_id]]]

    def index_of(self, action) -> int:
        """Gate id of a 4x5 action array; raises KeyError if it is not a Clifford."""
        key = tuple(map(tuple, np.asarray(action, dtype=np.uint8).tolist()))
        return _action_index()[key]

    def compose(self, first: int, second: int) -> int:
        """Gate id of ``second`` applied after ``first``."""
        rows = tuple(map(tuple, self.actions[first].tolist()))
        for op in self.program(second):
            rows = _apply_op(rows, op)
        return self.index_of(rows)


@lru_cache(maxsize=1)
def _enumerate():
    start = _IDENTITY
    paths = {start: ()}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for op in range(6):
            nxt = _apply_op(cur, op)
            if nxt not in paths:
                paths[nxt] = paths[cur] + (op,)
                queue.append(nxt)
    keys = sorted(paths)
    maxlen = max(len(p) for p in paths.values())
    programs = np.full((len(keys), maxlen), -1, dtype=np.int8)
    lengths = np.zeros(len(keys), dtype=np.int8)
    actions = np.zeros((len(keys), 4, 5), dtype=np.uint8)
    for g, key in enumerate(keys):
        path = paths[key]
        programs[g, : len(path)] = path
        lengths[g] = len(path)
        actions[g] = key
    return CliffordTable(programs, lengths, actions)


@lru_cache(maxsize=1)
def _action_index():
    table = _enumerate()
    return {tuple(map(tuple, a.tolist())): g for g, a in enumerate(table.actions)}


def clifford_table() -> CliffordTable:
    """The (cached) canonical two-qubit Clifford table."""
    table = _enumerate()
    if len(table) != N_CLIFFORD2:
        raise RuntimeError(f"Clifford enumeration produced {len(table)} elements")
    return table


def sample_clifford2(rng: np.random.Generator, size=None):
    """Uniform gate id(s) in ``[0, 11520)`` drawn from ``rng``."""
    return rng.integers(0, N_CLIFFORD2, size=size)


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_I2 = np.eye(2, dtype=complex)
# qubit a is the more significant tensor factor
_CX_AB = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CX_BA = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)
_OP_MATRICES = (
    np.kron(_H, _I2),
    np.kron(_I2, _H),
    np.kron(_S, _I2),
    np.kron(_I2, _S),
    _CX_AB,
    _CX_BA,
)


def gate_unitary(gate_id: int) -> np.ndarray:
    """4x4 unitary of a gate, qubit ``a`` as the most significant factor."""
    u = np.eye(4, dtype=complex)
    for op in clifford_table().program(gate_id):
        u = _OP_MATRICES[op] @ u
    return u
