"""Realization dispatch, seeding, theory overlays and comparisons."""

from __future__ import annotations

import json
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import dense, gaussian
from ..circuits import CircuitSpec, RegionSchedule, region_sites, run_trajectory
from ..series import SICSeries
from ..theory import (
    predict_many_to_many,
    predict_one_to_all,
    predict_one_to_one,
    quasiparticle_mi,
    ssh_dispersion,
    tight_binding,
)
from .config import ExperimentConfig, config_to_dict, parse_config


class BackendError(RuntimeError):
    """A realization failed inside a backend."""


class UnsupportedRegime(ValueError):
    """No analytic prediction exists for this configuration."""


def realization_seed(master_seed: int, index: int, sweep_index: int | None = None) -> np.random.SeedSequence:
    key = (index,) if sweep_index is None else (sweep_index, index)
    return np.random.SeedSequence(master_seed, spawn_key=key)


# -- single realizations -------------------------------------------------------

def _theta(cfg: ExperimentConfig, rng: np.random.Generator) -> float:
    th = cfg.model.theta
    return float(rng.uniform(0, 2 * np.pi)) if th == "random" else float(th)


def _e_site(cfg: ExperimentConfig) -> int:
    e = cfg.e_sites()
    return cfg.model.L // 2 if e is None else e[0]


def _clifford(cfg: ExperimentConfig, times, rng) -> np.ndarray:
    m = cfg.model
    e = cfg.e_sites()
    spec = CircuitSpec(m.L, m.boundary == "periodic", m.p_m, m.floquet,
                       int(max(times)), cfg.encoding.scheme,
                       None if e is None else tuple(e))
    series = run_trajectory(spec, RegionSchedule(tuple(cfg.output_l_a()), tuple(int(t) for t in times)), rng)
    return series.mean


def _gaussian(cfg: ExperimentConfig, times, rng) -> np.ndarray:
    m = cfg.model
    params = gaussian.ModelParams(J=m.J, w=m.w, theta=_theta(cfg, rng), alpha=m.alpha,
                                  delta=m.delta, boundary=m.boundary)
    h = (gaussian.build_ssh if m.name == "ssh" else gaussian.build_aa)(params, m.L)
    e = _e_site(cfg)
    C0 = gaussian.encoded_neel(m.L, e)
    regions = [region_sites(m.L, la, e, m.boundary == "periodic") for la in cfg.output_l_a()]
    return np.array([gaussian.mi_profile(gaussian.evolve(C0, h, t), regions, [m.L]) for t in times])


def _dense(cfg: ExperimentConfig, times, rng) -> np.ndarray:
    m = cfg.model
    H = dense.build_interacting_aa(m.L, m.J, m.U, m.w, _theta(cfg, rng), m.boundary == "periodic",
                                   1, m.alpha)
    if cfg.schedule.kind == "level_spacing":
        return np.array([[dense.level_spacing_ratio(H.eigenvalues(m.L // 2))]])
    e = _e_site(cfg)
    psi0 = dense.neel_bell_state(m.L, e)
    regions = [region_sites(m.L, la, e, m.boundary == "periodic") for la in cfg.output_l_a()]
    out = np.empty((len(times), len(regions)))
    for i, t in enumerate(times):
        psi = H.evolve(psi0, t)
        out[i] = [dense.mutual_information(psi, a, [m.L]) for a in regions]
    return out


_BACKENDS = {"clifford": _clifford, "gaussian": _gaussian, "dense": _dense}


def run_realization(cfg: ExperimentConfig, index: int, sweep_index: int | None = None) -> np.ndarray:
    """MI array of shape (n_output_times, n_L_A) for one realization."""
    rng = np.random.default_rng(realization_seed(cfg.sampling.master_seed, index, sweep_index))
    times = cfg.sample_times()
    raw = _BACKENDS[cfg.backend](cfg, times, rng)
    if cfg.schedule.kind == "steady":
        raw = raw.mean(axis=0, keepdims=True)
    return raw


def _worker(payload):
    data, index, sweep_index = payload
    cfg = parse_config(data)
    return run_realization(cfg, index, sweep_index)


def git_hash() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], cwd=Path(__file__).parent,
                             capture_output=True, text=True, timeout=5)
        return out.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


@dataclass
class RunResult:
    series: SICSeries
    manifest: dict = field(default_factory=dict)


def run(cfg: ExperimentConfig, jobs: int | None = None, sweep_index: int | None = None) -> RunResult:
    """All realizations of ``cfg``, aggregated.  Output is independent of ``jobs``."""
    jobs = cfg.sampling.jobs if jobs is None else jobs
    n = cfg.n_realizations
    cfg.sample_times()  # surfaces grid errors as ConfigError before any work
    start = time.perf_counter()
    try:
        if jobs <= 1:
            samples = [run_realization(cfg, i, sweep_index) for i in range(n)]
        else:
            data = config_to_dict(cfg)
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                samples = list(pool.map(_worker, [(data, i, sweep_index) for i in range(n)]))
    except (ValueError, MemoryError, RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        raise BackendError(f"{cfg.backend} backend failed: {exc}") from exc
    elapsed = time.perf_counter() - start
    observable = "level_spacing_ratio" if cfg.schedule.kind == "level_spacing" else "mutual_information"
    series = SICSeries.from_samples(cfg.output_times(), cfg.output_l_a(), np.stack(samples),
                                    {"backend": cfg.backend, "observable": observable})
    manifest = {
        "config": config_to_dict(cfg),
        "master_seed": cfg.sampling.master_seed,
        "sweep_index": sweep_index,
        "n_realizations": n,
        "observable": observable,
        "git_hash": git_hash(),
        "elapsed_seconds": round(elapsed, 3),
        "jobs": jobs,
    }
    return RunResult(series, manifest)


# -- theory ---------------------------------------------------------------------

def predict(cfg: ExperimentConfig) -> SICSeries:
    """Analytic curve on the same (t, L_A) axes as ``run(cfg)``."""
    m, sch = cfg.model, cfg.schedule
    if sch.kind == "level_spacing":
        raise UnsupportedRegime("no analytic prediction for level statistics")
    times = cfg.sample_times()
    l_a = cfg.output_l_a()
    L = m.L
    cols = []
    if cfg.backend == "clifford":
        if m.p_m > 0:
            raise UnsupportedRegime("membrane predictions need measurement-free circuits")
        if cfg.e_sites() is not None:
            raise UnsupportedRegime("membrane predictions assume the default E placement")
        fn = {"one_to_one": predict_one_to_one, "one_to_all": predict_one_to_all,
              "many_to_many": predict_many_to_many}[cfg.encoding.scheme]
        for la in l_a:
            cols.append(np.asarray(fn(L, la, times), dtype=float))
    elif cfg.backend == "gaussian":
        if m.name == "aa" and m.w != 0:
            raise UnsupportedRegime("quasiparticle picture applies to clean chains (w = 0)")
        if m.name == "ssh" and m.delta < 0:
            raise UnsupportedRegime("topological SSH chains carry edge modes the picture misses")
        boundary = "periodic" if m.boundary == "periodic" else "reflecting"
        if m.name == "ssh":
            if boundary == "periodic":
                raise UnsupportedRegime("SSH predictions are implemented for open chains")
            spec = ssh_dispersion(m.delta)
        else:
            spec = tight_binding(m.J, boundary=boundary)
        e = _e_site(cfg)
        if boundary == "periodic" and e != L // 2:
            raise UnsupportedRegime("periodic predictions assume E at the chain centre")
        if boundary == "reflecting" and e not in (0, L // 2):
            raise UnsupportedRegime("open-chain predictions need E at the edge or the centre")
        placement = "boundary" if boundary == "reflecting" and e == 0 else "center"
        for la in l_a:
            cols.append(np.asarray(quasiparticle_mi(L, la, times, spec, placement), dtype=float))
    else:
        raise UnsupportedRegime("no analytic prediction for the interacting dense backend")
    mean = np.stack(cols, axis=1)
    if sch.kind == "steady":
        mean = mean.mean(axis=0, keepdims=True)
    return SICSeries(cfg.output_times(), l_a, mean, np.zeros_like(mean), 0,
                     {"backend": cfg.backend, "observable": "theory"})


# -- comparison -----------------------------------------------------------------

def first_crossing(times, values, level: float):
    """First time ``values`` falls below ``level`` (linear interpolation), or None."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    below = np.flatnonzero(v < level)
    if below.size == 0:
        return None
    k = below[0]
    if k == 0:
        return float(t[0])
    v0, v1 = v[k - 1], v[k]
    return float(t[k - 1] + (v0 - level) / (v0 - v1) * (t[k] - t[k - 1]))


def compare(sim: SICSeries, theory: SICSeries, t_min: float | None = None,
            levels=(1.9, 0.1)) -> dict:
    """Residuals and threshold-crossing times of ``sim`` against ``theory``."""
    if not sim.same_axes(theory):
        raise ValueError("series have different (t, L_A) axes")
    resid = sim.mean - theory.mean
    mask = np.ones(sim.times.size, bool) if t_min is None else sim.times >= t_min
    out = {"max_abs_residual": float(np.abs(resid[mask]).max()) if mask.any() else 0.0,
           "per_l_a": {}}
    for j, la in enumerate(sim.l_a):
        entry = {"max_abs_residual": float(np.abs(resid[mask, j]).max()) if mask.any() else 0.0}
        for level in levels:
            ts = first_crossing(sim.times, sim.mean[:, j], level)
            tt = first_crossing(theory.times, theory.mean[:, j], level)
            rel = None if ts is None or tt is None or tt == 0 else abs(ts - tt) / tt
            entry[f"crossing_{level:g}"] = {"sim": ts, "theory": tt, "rel_error": rel}
        out["per_l_a"][int(la)] = entry
    return out


def write_outputs(result: RunResult, out_dir, stem: str) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{stem}.csv"
    json_path = out_dir / f"{stem}.json"
    result.series.to_csv(csv_path)
    json_path.write_text(json.dumps(result.manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, json_path
