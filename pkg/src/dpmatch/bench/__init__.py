"""Benchmark harness: config parsing, metrics, scenario runners, plots."""

from .config import ExperimentConfig, load_config, parse_config
from .metrics import is_successful, recovery_rate
from .runner import run_scenario
from .plots import emit_plots

__all__ = [
    "ExperimentConfig",
    "load_config",
    "parse_config",
    "recovery_rate",
    "is_successful",
    "run_scenario",
    "emit_plots",
]
