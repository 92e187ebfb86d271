"""Plain state-vector simulation of small qubit registers (qubit 0 most significant).

Used as an independent oracle for the stabilizer simulator and for the
Pauli-sum identities.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .sector import entropy_from_spectrum

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class QubitState:
    def __init__(self, n_qubits: int, vector=None):
        self.n_qubits = n = int(n_qubits)
        if vector is None:
            vector = np.zeros(2 ** n, dtype=complex)
            vector[0] = 1.0
        self.vector = np.asarray(vector, dtype=complex).reshape(2 ** n)

    def copy(self) -> "QubitState":
        return QubitState(self.n_qubits, self.vector.copy())

    def _tensor(self):
        return self.vector.reshape([2] * self.n_qubits)

    def apply(self, u: np.ndarray, qubits) -> None:
        """Apply a 2^k x 2^k unitary to ``qubits`` (first listed = most significant)."""
        qubits = list(qubits)
        k = len(qubits)
        t = np.moveaxis(self._tensor(), qubits, list(range(k)))
        shape = t.shape
        t = (u @ t.reshape(2 ** k, -1)).reshape(shape)
        self.vector = np.moveaxis(t, list(range(k)), qubits).reshape(-1)

    def h(self, q):
        self.apply(np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2), [q])

    def cnot(self, c, t):
        u = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
        self.apply(u, [c, t])

    def prob_one(self, q: int) -> float:
        t = np.moveaxis(self._tensor(), q, 0)
        return float(np.sum(np.abs(t[1]) ** 2))

    def project_z(self, q: int, outcome: int) -> float:
        """Project qubit ``q`` onto ``outcome`` and renormalize; returns its probability."""
        t = np.moveaxis(self._tensor(), q, 0).copy()
        t[1 - outcome] = 0
        p = float(np.sum(np.abs(t) ** 2))
        if p <= 0:
            raise ValueError("projection onto an impossible outcome")
        self.vector = np.moveaxis(t, 0, q).reshape(-1) / np.sqrt(p)
        return p

    def reduced_density_matrix(self, region) -> np.ndarray:
        region = list(region)
        t = np.moveaxis(self._tensor(), region, list(range(len(region))))
        m = t.reshape(2 ** len(region), -1)
        return m @ m.conj().T

    def entropy(self, region) -> float:
        region = sorted(set(int(q) for q in region))
        if not region or len(region) == self.n_qubits:
            return 0.0
        t = np.moveaxis(self._tensor(), region, list(range(len(region))))
        sv = np.linalg.svd(t.reshape(2 ** len(region), -1), compute_uv=False)
        return entropy_from_spectrum(sv ** 2)

    def renyi2(self, region) -> float:
        rho = self.reduced_density_matrix(region)
        return float(-np.log2(np.real(np.trace(rho @ rho))))

    def mutual_information(self, a, r) -> float:
        a, r = list(a), list(r)
        return self.entropy(a) + self.entropy(r) - self.entropy(a + r)


def pauli_string(labels: str) -> np.ndarray:
    m = np.array([[1.0 + 0j]])
    for c in labels:
        m = np.kron(m, PAULIS[c])
    return m


def all_pauli_strings(k: int):
    """All 4^k Pauli strings (identity included) on k qubits as matrices."""
    for labels in product("IXYZ", repeat=k):
        yield pauli_string("".join(labels))


def embed(op: np.ndarray, qubits, n: int) -> np.ndarray:
    """Operator on ``qubits`` (first = most significant) as a 2^n matrix."""
    qubits = list(qubits)
    k = len(qubits)
    full = np.eye(2 ** n, dtype=complex).reshape([2] * (2 * n))
    # act on the output legs of the identity
    t = np.moveaxis(full, qubits, list(range(k)))
    shape = t.shape
    t = (op @ t.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(t, list(range(k)), qubits).reshape(2 ** n, 2 ** n)


def circuit_unitary(n: int, gates) -> np.ndarray:
    """Unitary of a list of (gate_id, q1, q2) two-qubit Cliffords."""
    from ..stabilizer.clifford2 import gate_unitary

    u = np.eye(2 ** n, dtype=complex)
    for g, a, b in gates:
        u = embed(gate_unitary(int(g)), [a, b], n) @ u
    return u
