"""Experiment configuration: pydantic models read from / written to TOML.

Schema (every key optional unless marked required; unknown keys are errors)::

    backend = "clifford"          # required: clifford | gaussian | dense
    output = "results"            # default output directory
    theory_overlay = false        # also write the theory curve after `run`

    [model]
    L = 64                        # required
    name = "brickwall"            # brickwall (clifford) | aa | ssh
    boundary = "periodic"         # periodic | open
    p_m = 0.0                     # clifford only
    floquet = false               # clifford only
    J = 1.0
    U = 0.0                       # dense only
    w = 0.0
    theta = "random"              # float, or "random" (uniform per realization)
    alpha = 0.6180339887498949
    delta = 0.0                   # ssh only

    [encoding]
    scheme = "one_to_one"         # one_to_one | many_to_many | one_to_all
    e_position = 32               # int or list of ints; default: centre

    [schedule]
    kind = "dynamics"             # dynamics | steady | level_spacing
    l_a = [8, 16, 32]
    times = [0, 1, 2]             # explicit times, or:
    t_max = 128.0                 # with dt (uniform) or grid = "log"
    dt = 1.0
    grid = "uniform"              # uniform | log (dt = 1 below 10, then log-spaced)
    window = [64, 128]            # steady averaging window (inclusive)
    stride = 1.0                  # steady sampling step

    [sampling]
    n_realizations = 200          # default 200 / 50 / 100 by backend
    master_seed = 0
    jobs = 1
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
import tomli
import tomli_w
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..gaussian import ALPHA

DEFAULT_REALIZATIONS = {"clifford": 200, "gaussian": 50, "dense": 100}


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSection(_Strict):
    L: int = Field(gt=1)
    name: Optional[Literal["brickwall", "aa", "ssh"]] = None
    boundary: Literal["periodic", "open"] = "periodic"
    p_m: float = Field(0.0, ge=0.0, le=1.0)
    floquet: bool = False
    J: float = 1.0
    U: float = 0.0
    w: float = 0.0
    theta: Union[float, Literal["random"]] = "random"
    alpha: float = ALPHA
    delta: float = Field(0.0, gt=-1.0, lt=1.0)


class EncodingSection(_Strict):
    scheme: Literal["one_to_one", "many_to_many", "one_to_all"] = "one_to_one"
    e_position: Optional[Union[int, list[int]]] = None


class ScheduleSection(_Strict):
    kind: Literal["dynamics", "steady", "level_spacing"] = "dynamics"
    l_a: list[int] = Field(default_factory=list)
    times: Optional[list[float]] = None
    t_max: Optional[float] = Field(None, ge=0)
    dt: Optional[float] = Field(None, gt=0)
    grid: Literal["uniform", "log"] = "uniform"
    window: Optional[tuple[float, float]] = None
    stride: Optional[float] = Field(None, gt=0)


class SamplingSection(_Strict):
    n_realizations: Optional[int] = Field(None, ge=1)
    master_seed: int = Field(0, ge=0)
    jobs: int = Field(1, ge=1)


class ExperimentConfig(_Strict):
    backend: Literal["clifford", "gaussian", "dense"]
    output: Optional[str] = None
    theory_overlay: bool = False
    model: ModelSection
    encoding: EncodingSection = Field(default_factory=EncodingSection)
    schedule: ScheduleSection = Field(default_factory=ScheduleSection)
    sampling: SamplingSection = Field(default_factory=SamplingSection)

    @model_validator(mode="after")
    def _compatible(self):
        m, enc, sch = self.model, self.encoding, self.schedule
        b = self.backend
        if m.name is None:
            m.name = "brickwall" if b == "clifford" else "aa"
        if b == "clifford":
            if m.name != "brickwall":
                raise ValueError("clifford backend runs brickwall circuits only")
            if m.L % 2:
                raise ValueError("circuits need even L")
            if m.floquet and m.p_m > 0:
                raise ValueError("Floquet circuits run with p_m = 0")
            if sch.kind == "level_spacing":
                raise ValueError("level statistics need the dense backend")
        else:
            if m.name == "brickwall":
                raise ValueError(f"{b} backend needs model name 'aa' or 'ssh'")
            if m.p_m != 0 or m.floquet:
                raise ValueError("p_m and floquet apply to the clifford backend only")
            if enc.scheme != "one_to_one":
                raise ValueError(f"{enc.scheme} encoding is not available on the {b} backend")
            if m.L % 2:
                raise ValueError("the Neel initial state needs even L")
        if b == "gaussian":
            if m.U != 0:
                raise ValueError("U > 0 needs the dense backend")
            if sch.kind == "level_spacing":
                raise ValueError("level statistics need the dense backend")
        if b == "dense":
            if m.L > 16:
                raise ValueError("dense backend is limited to L <= 16")
            if m.name != "aa":
                raise ValueError("dense backend implements the interacting AA chain")
        if m.name != "ssh" and m.delta != 0:
            raise ValueError("delta applies to the ssh model only")
        if sch.kind != "level_spacing":
            if not sch.l_a:
                raise ValueError("schedule.l_a must list at least one subsystem size")
            if any(not 0 < la <= m.L for la in sch.l_a):
                raise ValueError("every L_A must lie in (0, L]")
            if enc.scheme == "many_to_many" and enc.e_position is None and min(sch.l_a) < m.L // 2:
                raise ValueError("many_to_many regions must contain E, so L_A >= L/2")
        if sch.times is not None and (sch.t_max is not None or sch.dt is not None):
            raise ValueError("give either schedule.times or t_max/dt, not both")
        if sch.times is not None and any(np.diff(sch.times) < 0):
            raise ValueError("schedule.times must be non-decreasing")
        if sch.window is not None and sch.window[1] < sch.window[0]:
            raise ValueError("window end precedes its start")
        e = enc.e_position
        if e is not None:
            sites = [e] if isinstance(e, int) else e
            if any(not 0 <= s < m.L for s in sites):
                raise ValueError("e_position out of range")
        return self

    # -- derived quantities --------------------------------------------------
    @property
    def n_realizations(self) -> int:
        n = self.sampling.n_realizations
        return DEFAULT_REALIZATIONS[self.backend] if n is None else n

    def e_sites(self):
        e = self.encoding.e_position
        if e is None:
            return None
        return [e] if isinstance(e, int) else list(e)

    def steady_window(self) -> tuple[float, float]:
        if self.schedule.window is not None:
            return tuple(self.schedule.window)
        L = self.model.L
        if self.backend == "clifford":
            return (2 * L, 4 * L) if self.model.floquet else (L, 2 * L)
        if self.backend == "gaussian":
            return (L, 2 * L)
        return (10.0 * L, 100.0 * L)

    def sample_times(self) -> np.ndarray:
        """Times at which MI is recorded (the averaging samples for steady runs)."""
        from ..dense import mbl_time_grid

        sch = self.schedule
        L = self.model.L
        if sch.kind == "level_spacing":
            return np.array([0.0])
        if sch.kind == "steady":
            lo, hi = self.steady_window()
            if sch.stride is not None:
                step = sch.stride
            elif self.backend == "clifford":
                step = 1.0
            elif self.backend == "gaussian":
                step = 0.5
            else:
                step = (hi - lo) / 20
            t = np.arange(lo, hi + step / 2, step)
        elif sch.times is not None:
            t = np.asarray(sch.times, dtype=float)
        else:
            t_max = 2.0 * L if sch.t_max is None else sch.t_max
            if sch.grid == "log":
                t = mbl_time_grid(t_max)
            else:
                dt = sch.dt if sch.dt is not None else (1.0 if self.backend == "clifford" else 0.5)
                t = np.arange(0.0, t_max + dt / 2, dt)
        if self.backend == "clifford" and not np.allclose(t, np.round(t)):
            raise ConfigError("clifford times must be whole double layers")
        return t

    def output_times(self) -> np.ndarray:
        if self.schedule.kind == "steady":
            return np.array([self.steady_window()[0]])
        return self.sample_times()

    def output_l_a(self) -> list[int]:
        if self.schedule.kind == "level_spacing":
            return [self.model.L]
        return list(self.schedule.l_a)


def load_config(path) -> ExperimentConfig:
    try:
        data = tomli.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed TOML in {path}: {exc}") from exc
    return parse_config(data)


def parse_config(data: dict) -> ExperimentConfig:
    from pydantic import ValidationError

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return cfg.model_dump(mode="json", exclude_none=True)


def dump_config(cfg: ExperimentConfig) -> str:
    return tomli_w.dumps(config_to_dict(cfg))


def with_override(cfg: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    """Copy of ``cfg`` with one field replaced; ``axis`` is 'section.key' or a unique key."""
    data = config_to_dict(cfg)
    if "." in axis:
        section, key = axis.split(".", 1)
    else:
        hits = [s for s in ("model", "encoding", "schedule", "sampling")
                if key_in_section(s, axis)]
        if axis in ExperimentConfig.model_fields and not hits:
            data[axis] = value
            return parse_config(data)
        if len(hits) != 1:
            raise ConfigError(f"cannot resolve sweep axis {axis!r}")
        section, key = hits[0], axis
    if section not in ("model", "encoding", "schedule", "sampling") or not key_in_section(section, key):
        raise ConfigError(f"unknown sweep axis {axis!r}")
    data.setdefault(section, {})[key] = value
    return parse_config(data)


def key_in_section(section: str, key: str) -> bool:
    cls = {"model": ModelSection, "encoding": EncodingSection,
           "schedule": ScheduleSection, "sampling": SamplingSection}[section]
    return key in cls.model_fields
