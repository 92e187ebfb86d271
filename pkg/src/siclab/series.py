"""The MI(L_A, t) grid shared by every backend and the harness."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CSV_HEADER = ("t", "L_A", "mi_mean", "mi_sem", "n_real")


def _fmt(x: float) -> str:
    return "%.10g" % x


@dataclass
class SICSeries:
    """Mutual information I(A:R) on a (time, subsystem size) grid.

    ``mean`` and ``sem`` have shape ``(len(times), len(l_a))``.
    """

    times: np.ndarray
    l_a: np.ndarray
    mean: np.ndarray
    sem: np.ndarray
    n_real: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.l_a = np.asarray(self.l_a, dtype=np.int64)
        self.mean = np.asarray(self.mean, dtype=float).reshape(len(self.times), len(self.l_a))
        self.sem = np.asarray(self.sem, dtype=float).reshape(self.mean.shape)
        if np.any(self.sem < 0):
            raise ValueError("sem must be non-negative")
        self.n_real = int(self.n_real)

    @classmethod
    def from_samples(cls, times, l_a, samples, metadata=None) -> "SICSeries":
        """Aggregate ``samples[realization, t, L_A]`` into mean and standard error."""
        s = np.asarray(samples, dtype=float)
        n = s.shape[0]
        mean = s.mean(axis=0)
        if n > 1:
            sem = s.std(axis=0, ddof=1) / np.sqrt(n)
        else:
            sem = np.zeros_like(mean)
        return cls(times, l_a, mean, sem, n, dict(metadata or {}))

    def column(self, l_a: int) -> np.ndarray:
        idx = np.flatnonzero(self.l_a == l_a)
        if idx.size == 0:
            raise KeyError(f"L_A={l_a} not in series")
        return self.mean[:, idx[0]]

    def same_axes(self, other: "SICSeries") -> bool:
        return (
            self.times.shape == other.times.shape
            and np.allclose(self.times, other.times)
            and np.array_equal(self.l_a, other.l_a)
        )

    # -- CSV ---------------------------------------------------------------
    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_HEADER) + "\n")
        for i, t in enumerate(self.times):
            for j, la in enumerate(self.l_a):
                buf.write(
                    f"{_fmt(t)},{int(la)},{_fmt(self.mean[i, j])},"
                    f"{_fmt(self.sem[i, j])},{self.n_real}\n"
                )
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf-8")
        return text

    @classmethod
    def from_csv(cls, path_or_text, metadata=None) -> "SICSeries":
        p = Path(str(path_or_text)) if "\n" not in str(path_or_text) else None
        text = p.read_text(encoding="utf-8") if p is not None else str(path_or_text)
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(f"bad CSV header {header!r}")
        rows = [r for r in reader if r]
        if not rows:
            raise ValueError("CSV has no data rows")
        t = np.array([float(r[0]) for r in rows])
        la = np.array([int(r[1]) for r in rows])
        times = np.unique(t)
        l_a = np.unique(la)
        mean = np.full((times.size, l_a.size), np.nan)
        sem = np.full_like(mean, np.nan)
        ti = np.searchsorted(times, t)
        li = np.searchsorted(l_a, la)
        mean[ti, li] = [float(r[2]) for r in rows]
        sem[ti, li] = [float(r[3]) for r in rows]
        if np.isnan(mean).any():
            raise ValueError("CSV does not cover a full (t, L_A) grid")
        n_real = {int(r[4]) for r in rows}
        if len(n_real) != 1:
            raise ValueError("realization count differs between cells")
        return cls(times, l_a, mean, sem, n_real.pop(), dict(metadata or {}))
