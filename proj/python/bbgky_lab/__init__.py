"""Finite-particle BBGKY and correlation hierarchy laboratory."""

from ._core import (
    ConfigError,
    RunRecord,
    SystemConfig,
    cluster_expand,
    cluster_invert,
    load_config,
    parse_config,
    random_sequence,
    run_scenario,
    verify_suite,
)

__all__ = [
    "ConfigError",
    "RunRecord",
    "SystemConfig",
    "cluster_expand",
    "cluster_invert",
    "load_config",
    "parse_config",
    "random_sequence",
    "run_scenario",
    "verify_suite",
]
