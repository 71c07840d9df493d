#!/usr/bin/env python3
"""
Readout Nonlinearity Sweep CLI

Command-line interface for the coefficient, SNR, response, map, rate and
oracle sweeps. Every table is written to --out with the resolved run
config echoed in its header. Runs are fully deterministic; --seed is
accepted for interface stability and ignored.

Exit codes: 0 success, 1 configuration error, 2 some fixed point did not
converge (tables are still written, with per-row flags).

Usage:
    python scripts/run_sweep.py coeffs --config configs/two_level.ini
    python scripts/run_sweep.py response --config configs/bistable.ini --out results
    python scripts/run_sweep.py map --threads 4 --format json
"""

import logging
import sys
from pathlib import Path
from typing import Optional

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import typer
from rich.console import Console
from rich.table import Table

from config import get_settings
from src import __version__
from src.cli import (
    CommandResult,
    ConfigError,
    RunConfig,
    cmd_coeffs,
    cmd_map,
    cmd_oracle,
    cmd_rates,
    cmd_response,
    cmd_snr,
    load_run_config,
    write_table,
)
from src.eigenblocks import BlockError, EigensolverError
from src.metrics import SpectrumError
from src.model import ModelError
from src.response import SweepError

EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2

# raised by the library for inputs no run can succeed with
RUN_ERRORS = (ConfigError, ModelError, SweepError, BlockError, SpectrumError, EigensolverError)

app = typer.Typer(
    name="readout-nonlinearity",
    help="Readout Nonlinearity - dispersive coefficients, photon response and QND rates",
    add_completion=False,
)
console = Console()

ConfigOption = typer.Option(None, "--config", "-c", help="INI run configuration (defaults if omitted)")
OutOption = typer.Option(Path("results"), "--out", "-o", help="Output directory")
FormatOption = typer.Option(None, "--format", "-f", help="Output format: csv or json")
ThreadsOption = typer.Option(None, "--threads", "-j", help="Worker processes for coeffs, map and rate sweeps")
SeedOption = typer.Option(None, "--seed", help="Ignored; every run is deterministic")


@app.callback()
def main() -> None:
    """Configure logging for every subcommand."""
    settings = get_settings()
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
    )


def _load(config: Optional[Path]) -> RunConfig:
    if config is None:
        return RunConfig()
    try:
        return load_run_config(config)
    except ConfigError as e:
        console.print(f"[red]Config error:[/red] {e}")
        raise typer.Exit(EXIT_CONFIG)


def _resolve_format(fmt: Optional[str], cfg: RunConfig) -> str:
    resolved = fmt or cfg.output.format or get_settings().output_format
    if resolved not in ("csv", "json"):
        console.print(f"[red]Error:[/red] unknown format '{resolved}' (use csv or json)")
        raise typer.Exit(EXIT_CONFIG)
    return resolved


def _finish(name: str, cfg: RunConfig, result: CommandResult, out: Path, fmt: str) -> None:
    """Attach the config echo, write the tables and set the exit code."""
    header = [("tool", f"readout-nonlinearity {__version__}"), ("command", name)]
    total = len(result.tables)
    summary = Table(title=f"{name} output", show_header=True, header_style="bold")
    summary.add_column("Table", style="cyan")
    summary.add_column("Rows", justify="right")
    summary.add_column("File")

    for k, table in enumerate(result.tables, start=1):
        table.name = f"{cfg.output.prefix}{table.name}"
        table.meta = dict(header + [("table", table.name)] + cfg.resolved_items())
        path = write_table(table, out, fmt)
        console.print(f"[dim][{k}/{total}][/dim] wrote {path}")
        summary.add_row(table.name, str(len(table.rows)), str(path))

    console.print()
    console.print(summary)
    if not result.converged:
        console.print("[yellow]Warning:[/yellow] some fixed points did not converge (see 'converged' columns)")
        raise typer.Exit(EXIT_NOT_CONVERGED)


def _run(name: str, config: Optional[Path], out: Path, fmt: Optional[str], run) -> None:
    cfg = _load(config)
    resolved = _resolve_format(fmt, cfg)
    console.print(f"[bold blue]readout-nonlinearity {name}[/bold blue]")
    try:
        result = run(cfg)
    except RUN_ERRORS as e:
        console.print(f"[red]Error:[/red] {type(e).__name__}: {e}")
        raise typer.Exit(EXIT_CONFIG)
    _finish(name, cfg, result, out, resolved)


def _workers(threads: Optional[int]) -> int:
    return max(1, threads if threads is not None else get_settings().workers)


@app.command()
def coeffs(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Analytic and numeric ac-Stark / Kerr coefficients over the resonator frequency."""
    workers = _workers(threads)
    _run("coeffs", config, out, fmt, lambda cfg: cmd_coeffs(cfg, workers=workers))


@app.command()
def snr(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Cavity pull and SNR versus mean photon number for three pull scenarios."""
    _run("snr", config, out, fmt, cmd_snr)


@app.command()
def response(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Hysteresis power sweeps of the photon number and effective frequency."""
    _run("response", config, out, fmt, cmd_response)


@app.command("map")
def map_(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Photon number over measurement frequency and power, per qubit state."""
    workers = _workers(threads)
    _run("map", config, out, fmt, lambda cfg: cmd_map(cfg, workers=workers))


@app.command()
def rates(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Purcell, dressed-decay and dressed-dephasing rates versus power."""
    workers = _workers(threads)
    _run("rates", config, out, fmt, lambda cfg: cmd_rates(cfg, workers=workers))


@app.command()
def oracle(
    config: Optional[Path] = ConfigOption,
    out: Path = OutOption,
    fmt: Optional[str] = FormatOption,
    threads: Optional[int] = ThreadsOption,
    seed: Optional[int] = SeedOption,
) -> None:
    """Brute-force reference checks of the spectrum and the fixed points."""
    _run("oracle", config, out, fmt, cmd_oracle)


if __name__ == "__main__":
    app()
