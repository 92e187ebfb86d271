"""Bit-packed Aaronson-Gottesman tableau for pure stabilizer states.

Storage is qubit-major: ``xs[q]`` is a packed bit-column whose bit ``i``
is the X component of stabilizer generator ``i`` on qubit ``q`` (likewise
``zs`` and the destabilizer arrays ``xd``/``zd``).  Gate updates then act on
whole words of generators at once, and the entropy of a region is the rank
of the region's columns, which are already packed rows.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .clifford2 import clifford_table

_ONE = np.uint64(1)


@nb.njit(cache=True)
def _h(x, z, r, a):
    for w in range(r.shape[0]):
        xa = x[a, w]
        za = z[a, w]
        r[w] ^= xa & za
        x[a, w] = za
        z[a, w] = xa


@nb.njit(cache=True)
def _s(x, z, r, a):
    for w in range(r.shape[0]):
        xa = x[a, w]
        r[w] ^= xa & z[a, w]
        z[a, w] ^= xa


@nb.njit(cache=True)
def _cx(x, z, r, a, b):
    for w in range(r.shape[0]):
        xa = x[a, w]
        zb = z[b, w]
        r[w] ^= xa & zb & ~(x[b, w] ^ z[a, w])
        x[b, w] ^= xa
        z[a, w] ^= zb


@nb.njit(cache=True)
def _run_program(x, z, r, prog, length, a, b):
    for k in range(length):
        op = prog[k]
        if op == 0:
            _h(x, z, r, a)
        elif op == 1:
            _h(x, z, r, b)
        elif op == 2:
            _s(x, z, r, a)
        elif op == 3:
            _s(x, z, r, b)
        elif op == 4:
            _cx(x, z, r, a, b)
        else:
            _cx(x, z, r, b, a)


@nb.njit(cache=True)
def apply_gates_kernel(xs, zs, rs, xd, zd, rd, programs, lengths, gate_ids, q1s, q2s):
    for k in range(gate_ids.shape[0]):
        g = gate_ids[k]
        _run_program(xs, zs, rs, programs[g], lengths[g], q1s[k], q2s[k])
        _run_program(xd, zd, rd, programs[g], lengths[g], q1s[k], q2s[k])


@nb.njit(cache=True)
def _bit(col, i):
    return (col[i >> 6] >> np.uint64(i & 63)) & np.uint64(1)


@nb.njit(cache=True)
def _multiply_rows(X, Z, R, mask, px, pz, pr):
    """Rows selected by ``mask`` <- row * (px, pz, pr); phases via mod-4 bit counters."""
    n, W = X.shape
    lo = np.zeros(W, dtype=np.uint64)
    hi = np.zeros(W, dtype=np.uint64)
    for j in range(n):
        a = px[j]
        b = pz[j]
        if a == 0 and b == 0:
            continue
        for w in range(W):
            m = mask[w]
            if m == 0:
                continue
            x2 = X[j, w]
            z2 = Z[j, w]
            if a == 1 and b == 1:
                plus = z2 & ~x2
                minus = x2 & ~z2
            elif a == 1:
                plus = z2 & x2
                minus = z2 & ~x2
            else:
                plus = x2 & ~z2
                minus = x2 & z2
            plus &= m
            minus &= m
            carry = lo[w] & plus
            lo[w] ^= plus
            hi[w] ^= carry
            borrow = ~lo[w] & minus
            lo[w] ^= minus
            hi[w] ^= borrow
            if a == 1:
                X[j, w] ^= m
            if b == 1:
                Z[j, w] ^= m
    for w in range(W):
        flip = hi[w]
        if pr == 1:
            flip ^= mask[w]
        R[w] ^= flip & mask[w]


@nb.njit(cache=True)
def measure_z_kernel(xs, zs, rs, xd, zd, rd, q, coin):
    """Measure Z_q; returns (outcome, was_random).  ``coin`` is used only if random."""
    n, W = xs.shape
    p = -1
    for w in range(W):
        word = xs[q, w]
        if word != 0:
            for b in range(64):
                if (word >> np.uint64(b)) & np.uint64(1):
                    p = w * 64 + b
                    break
            break
    if p >= 0:
        px = np.empty(n, dtype=np.uint8)
        pz = np.empty(n, dtype=np.uint8)
        for j in range(n):
            px[j] = _bit(xs[j], p)
            pz[j] = _bit(zs[j], p)
        pr = np.uint8(_bit(rs, p))
        pw = p >> 6
        pbit = np.uint64(1) << np.uint64(p & 63)
        mask = xs[q].copy()
        mask[pw] &= ~pbit
        _multiply_rows(xs, zs, rs, mask, px, pz, pr)
        dmask = xd[q].copy()
        dmask[pw] &= ~pbit
        _multiply_rows(xd, zd, rd, dmask, px, pz, pr)
        # destabilizer p <- old stabilizer p; stabilizer p <- (+/-) Z_q
        for j in range(n):
            if px[j]:
                xd[j, pw] |= pbit
            else:
                xd[j, pw] &= ~pbit
            if pz[j]:
                zd[j, pw] |= pbit
            else:
                zd[j, pw] &= ~pbit
            xs[j, pw] &= ~pbit
            zs[j, pw] &= ~pbit
        zs[q, pw] |= pbit
        if pr:
            rd[pw] |= pbit
        else:
            rd[pw] &= ~pbit
        if coin:
            rs[pw] |= pbit
        else:
            rs[pw] &= ~pbit
        return coin, True
    # deterministic: Z_q is the product of stabilizers i with destabilizer i anticommuting
    sx = np.zeros(n, dtype=np.uint8)
    sz = np.zeros(n, dtype=np.uint8)
    phase = 0
    for i in range(n):
        if _bit(xd[q], i) == 0:
            continue
        if _bit(rs, i):
            phase += 2
        for j in range(n):
            x1 = _bit(xs[j], i)
            z1 = _bit(zs[j], i)
            x2 = sx[j]
            z2 = sz[j]
            if x1 == 1 and z1 == 1:
                phase += int(z2) - int(x2)
            elif x1 == 1:
                phase += int(z2) * (2 * int(x2) - 1)
            elif z1 == 1:
                phase += int(x2) * (1 - 2 * int(z2))
            sx[j] = x2 ^ x1
            sz[j] = z2 ^ z1
    return (phase % 4) // 2, False


@nb.njit(cache=True)
def gf2_rank_kernel(rows, ncols):
    """Rank over GF(2) of packed rows (destroys ``rows``)."""
    m = rows.shape[0]
    W = rows.shape[1]
    rank = 0
    for col in range(ncols):
        if rank == m:
            break
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        piv = -1
        for i in range(rank, m):
            if rows[i, w] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, W):
                tmp = rows[rank, k]
                rows[rank, k] = rows[piv, k]
                rows[piv, k] = tmp
        for i in range(piv + 1, m):
            if rows[i, w] & bit:
                for k in range(w, W):
                    rows[i, k] ^= rows[rank, k]
        rank += 1
    return rank


@nb.njit(cache=True)
def region_entropy_kernel(xs, zs, qubits):
    k = qubits.shape[0]
    W = xs.shape[1]
    rows = np.empty((2 * k, W), dtype=np.uint64)
    for a in range(k):
        q = qubits[a]
        for w in range(W):
            rows[2 * a, w] = xs[q, w]
            rows[2 * a + 1, w] = zs[q, w]
    return gf2_rank_kernel(rows, xs.shape[0]) - k


@nb.njit(cache=True)
def entropies_kernel(xs, zs, flat, offsets):
    """Entropies of many regions given as ``flat[offsets[k]:offsets[k+1]]``."""
    out = np.empty(offsets.shape[0] - 1, dtype=np.int64)
    for k in range(out.shape[0]):
        lo = offsets[k]
        hi = offsets[k + 1]
        if hi == lo:
            out[k] = 0
        else:
            out[k] = region_entropy_kernel(xs, zs, flat[lo:hi])
    return out


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a dense 0/1 matrix (any shape)."""
    m = np.asarray(matrix, dtype=np.uint8) & 1
    if m.size == 0:
        return 0
    packed = pack_bits(m)
    return int(gf2_rank_kernel(packed, m.shape[1]))


def pack_bits(m: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix row-wise into little-endian uint64 words."""
    rows, cols = m.shape
    W = (cols + 63) // 64
    padded = np.zeros((rows, W * 64), dtype=np.uint8)
    padded[:, :cols] = m
    bytes_ = np.packbits(padded.reshape(rows, W * 8, 8)[:, :, ::-1], axis=2)
    return bytes_.reshape(rows, W * 8).view("<u8").astype(np.uint64)


def unpack_bits(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    b = words.astype("<u8").view(np.uint8).reshape(rows, -1, 1)
    bits = np.unpackbits(b, axis=2)[:, :, ::-1].reshape(rows, -1)
    return bits[:, :cols]


class StabilizerTableau:
    """Pure stabilizer state on ``n_qubits`` qubits, initialised to ``|0...0>``.

    Holds stabilizers and destabilizers so Z-measurements with deterministic
    outcomes can be resolved without elimination.
    """

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        self.n_qubits = n = int(n_qubits)
        W = (n + 63) // 64
        self.xs = np.zeros((n, W), dtype=np.uint64)
        self.zs = np.zeros((n, W), dtype=np.uint64)
        self.xd = np.zeros((n, W), dtype=np.uint64)
        self.zd = np.zeros((n, W), dtype=np.uint64)
        self.rs = np.zeros(W, dtype=np.uint64)
        self.rd = np.zeros(W, dtype=np.uint64)
        for q in range(n):
            self.zs[q, q >> 6] |= _ONE << np.uint64(q & 63)
            self.xd[q, q >> 6] |= _ONE << np.uint64(q & 63)

    def copy(self) -> "StabilizerTableau":
        new = StabilizerTableau.__new__(StabilizerTableau)
        new.n_qubits = self.n_qubits
        for name in ("xs", "zs", "xd", "zd", "rs", "rd"):
            setattr(new, name, getattr(self, name).copy())
        return new

    # -- gates -----------------------------------------------------------
    def apply_gate(self, gate_id: int, q1: int, q2: int) -> None:
        self._check_pair(q1, q2)
        self.apply_gates(np.array([gate_id]), np.array([q1]), np.array([q2]))

    def apply_gates(self, gate_ids, q1s, q2s) -> None:
        """Apply a batch of two-qubit Cliffords in order (no index checks)."""
        table = clifford_table()
        apply_gates_kernel(
            self.xs, self.zs, self.rs, self.xd, self.zd, self.rd,
            table.programs, table.lengths,
            np.asarray(gate_ids, dtype=np.int64),
            np.asarray(q1s, dtype=np.int64),
            np.asarray(q2s, dtype=np.int64),
        )

    def h(self, q: int) -> None:
        _h(self.xs, self.zs, self.rs, q)
        _h(self.xd, self.zd, self.rd, q)

    def s(self, q: int) -> None:
        _s(self.xs, self.zs, self.rs, q)
        _s(self.xd, self.zd, self.rd, q)

    def cnot(self, control: int, target: int) -> None:
        self._check_pair(control, target)
        _cx(self.xs, self.zs, self.rs, control, target)
        _cx(self.xd, self.zd, self.rd, control, target)

    def x(self, q: int) -> None:
        # X flips the sign of generators with a Z component on q
        self.rs ^= self.zs[q]
        self.rd ^= self.zd[q]

    def _check_pair(self, q1, q2):
        if q1 == q2:
            raise ValueError("gate qubits must differ")
        for q in (q1, q2):
            if not 0 <= q < self.n_qubits:
                raise IndexError(f"qubit {q} out of range")

    # -- measurement -----------------------------------------------------
    def measure_z(self, q: int, coin: int) -> tuple[int, bool]:
        """Measure Z on ``q``.  ``coin`` (0/1) becomes the outcome when random.

        Returns ``(outcome, was_random)``.
        """
        if not 0 <= q < self.n_qubits:
            raise IndexError(f"qubit {q} out of range")
        out, rand = measure_z_kernel(
            self.xs, self.zs, self.rs, self.xd, self.zd, self.rd, q, int(coin)
        )
        return int(out), bool(rand)

    # -- entropy ---------------------------------------------------------
    def entropy(self, qubits) -> int:
        """Entanglement entropy (bits) of a set of qubits."""
        q = np.unique(np.asarray(qubits, dtype=np.int64))
        if q.size and (q[0] < 0 or q[-1] >= self.n_qubits):
            raise IndexError("region out of range")
        if 2 * q.size > self.n_qubits:
            q = np.setdiff1d(np.arange(self.n_qubits), q)
        if q.size == 0:
            return 0
        return int(region_entropy_kernel(self.xs, self.zs, q))

    def entropies(self, regions) -> np.ndarray:
        """Entropies of a list of regions in one compiled call."""
        n = self.n_qubits
        pieces = []
        for reg in regions:
            q = np.unique(np.asarray(reg, dtype=np.int64))
            if 2 * q.size > n:
                q = np.setdiff1d(np.arange(n), q)
            pieces.append(q)
        offsets = np.zeros(len(pieces) + 1, dtype=np.int64)
        offsets[1:] = np.cumsum([p.size for p in pieces])
        flat = np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.int64)
        return entropies_kernel(self.xs, self.zs, flat.astype(np.int64), offsets)

    def mutual_information(self, a, r) -> int:
        a = np.asarray(a, dtype=np.int64)
        r = np.asarray(r, dtype=np.int64)
        if np.intersect1d(a, r).size:
            raise ValueError("regions overlap")
        return self.entropy(a) + self.entropy(r) - self.entropy(np.concatenate([a, r]))

    # -- inspection ------------------------------------------------------
    def bits(self):
        """Dense (x, z, signs) of the stabilizers, one row per generator."""
        n = self.n_qubits
        x = unpack_bits(self.xs, n).T
        z = unpack_bits(self.zs, n).T
        r = unpack_bits(self.rs[None, :], n)[0]
        return x.copy(), z.copy(), r.copy()

    def destabilizer_bits(self):
        n = self.n_qubits
        x = unpack_bits(self.xd, n).T
        z = unpack_bits(self.zd, n).T
        return x.copy(), z.copy()

    def stabilizer_strings(self) -> list[str]:
        x, z, r = self.bits()
        table = np.array(["I", "X", "Z", "Y"])
        return [
            ("-" if r[i] else "+") + "".join(table[x[i] + 2 * z[i]])
            for i in range(self.n_qubits)
        ]

    def check_invariants(self) -> None:
        """Raise AssertionError unless the tableau is a valid pure-state tableau."""
        n = self.n_qubits
        x, z, _ = self.bits()
        xd, zd = self.destabilizer_bits()
        gram = (x @ z.T + z @ x.T) % 2
        assert not gram.any(), "stabilizers do not commute"
        assert gf2_rank(np.hstack([x, z])) == n, "stabilizers are dependent"
        cross = (xd @ z.T + zd @ x.T) % 2
        assert np.array_equal(cross, np.eye(n, dtype=cross.dtype)), "destabilizer pairing broken"
        dgram = (xd @ zd.T + zd @ xd.T) % 2
        assert not dgram.any(), "destabilizers do not commute"
