"""CLI module - run configs, subcommands and table writers."""

from .commands import (
    COMMANDS,
    CommandResult,
    SnrScenarios,
    cmd_coeffs,
    cmd_map,
    cmd_oracle,
    cmd_rates,
    cmd_response,
    cmd_snr,
    snr_scenarios,
)
from .output import ResultTable, read_table, render_csv, render_json, write_table
from .runconfig import SECTIONS, ConfigError, RunConfig, load_run_config

__all__ = [
    "COMMANDS",
    "SECTIONS",
    "CommandResult",
    "ConfigError",
    "ResultTable",
    "RunConfig",
    "SnrScenarios",
    "cmd_coeffs",
    "cmd_map",
    "cmd_oracle",
    "cmd_rates",
    "cmd_response",
    "cmd_snr",
    "load_run_config",
    "read_table",
    "render_csv",
    "render_json",
    "snr_scenarios",
    "write_table",
]
