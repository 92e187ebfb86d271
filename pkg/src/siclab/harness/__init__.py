"""Config-driven experiment runner and CLI."""

from .config import ConfigError, ExperimentConfig, dump_config, load_config, parse_config, with_override
from .runner import (
    BackendError,
    RunResult,
    UnsupportedRegime,
    compare,
    first_crossing,
    predict,
    realization_seed,
    run,
    run_realization,
)

__all__ = [
    "BackendError",
    "ConfigError",
    "ExperimentConfig",
    "RunResult",
    "UnsupportedRegime",
    "compare",
    "dump_config",
    "first_crossing",
    "load_config",
    "parse_config",
    "predict",
    "realization_seed",
    "run",
    "run_realization",
    "with_override",
]
