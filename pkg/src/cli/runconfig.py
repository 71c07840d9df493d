"""
INI run configurations.

One section per concern, every key optional, every frequency in MHz:

    [system]      ladder, resonator and linewidth
    [coeffs]      ω_r grid for the dispersive coefficients
    [snr]         weak-driving SNR scenarios
    [response]    power sweeps per ladder size and level
    [map]         power × measurement-frequency maps
    [rates]       QND rates along the excited-state up-sweep
    [dephasing]   charge dispersions and noise spectrum
    [solver]      fixed-point controls (defaults from the process settings)
    [output]      output format and file prefix
    [oracle]      brute-force reference checks

Unknown sections and keys are rejected. Every error names the file and line
of the offending entry.
"""

import configparser
import logging
import math
import re
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.metrics import NoiseSpectrum, OneOverFNoise, WhiteNoise
from src.model import (
    MlsSpec,
    ModelError,
    SystemSpec,
    build_transmon_spec,
    default_charge_dispersions,
    ej_over_ec_from_ladder,
    exponential_charge_dispersions,
)
from src.response import SolverOptions, SweepDirection

logger = logging.getLogger(__name__)

_SECTION_LINE = re.compile(r"^\[(?P<name>[^\]]+)\]")
_KEY_LINE = re.compile(r"^(?P<key>[^=:\s][^=:]*?)\s*[=:]")


class ConfigError(Exception):
    """Raised when a run configuration cannot be read or validated."""

    pass


def _split_list(value):
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return value


def _power_grid(start: float, stop: float, step: float) -> list[float]:
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [float(start + k * step) for k in range(count)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SystemSection(_Section):
    """Transmon-like ladder unless an explicit ladder is given."""

    omega_10: float = Field(default=6000.0, gt=0.0)
    omega_21: float = Field(default=5750.0, gt=0.0)
    g0: float = Field(default=100.0, gt=0.0)
    num_levels: int = Field(default=6, ge=2)
    omega_r: float = Field(default=7000.0, gt=0.0)
    kappa: float = Field(default=1.0, gt=0.0)
    level_freqs: tuple[float, ...] | None = None
    couplings: tuple[float, ...] | None = None

    split_lists = field_validator("level_freqs", "couplings", mode="before")(_split_list)

    @model_validator(mode="after")
    def _check_explicit(self) -> "SystemSection":
        if (self.level_freqs is None) != (self.couplings is None):
            raise ValueError("level_freqs and couplings must be given together")
        if self.level_freqs is not None and len(self.level_freqs) != self.num_levels:
            raise ValueError(f"num_levels = {self.num_levels} but {len(self.level_freqs)} level_freqs given")
        self.mls()
        return self

    def mls(self, num_levels: int | None = None) -> MlsSpec:
        """Ladder truncated to num_levels (all configured levels by default).

        Raises:
            ValueError: If the ladder is invalid or shorter than requested.
        """
        m = num_levels or self.num_levels
        if self.level_freqs is None:
            try:
                return build_transmon_spec(self.omega_10, self.omega_21, self.g0, m)
            except ModelError as e:
                raise ValueError(str(e)) from e
        if m > len(self.level_freqs):
            raise ValueError(f"explicit ladder has {len(self.level_freqs)} levels, {m} requested")
        return MlsSpec(level_freqs=self.level_freqs[:m], couplings=self.couplings[: m - 1])

    def spec(self, num_levels: int | None = None, omega_r: float | None = None) -> SystemSpec:
        return SystemSpec(
            mls=self.mls(num_levels),
            omega_r=omega_r if omega_r is not None else self.omega_r,
            kappa=self.kappa,
        )


class CoeffsSection(_Section):
    ladders: tuple[int, ...] = (2, 6)
    omega_r_min: float = Field(default=4000.0, gt=0.0)
    omega_r_max: float = Field(default=10000.0, gt=0.0)
    points: int = Field(default=601, ge=1)
    fit_photons: tuple[int, ...] = (0, 1, 2, 3, 4)

    split_lists = field_validator("ladders", "fit_photons", mode="before")(_split_list)

    @model_validator(mode="after")
    def _check_grid(self) -> "CoeffsSection":
        if self.omega_r_max < self.omega_r_min:
            raise ValueError("omega_r_max must be >= omega_r_min")
        if any(m < 2 for m in self.ladders):
            raise ValueError("ladders need at least 2 levels")
        if len(set(self.fit_photons)) < 2 or min(self.fit_photons) < 0:
            raise ValueError("fit_photons needs two distinct non-negative photon numbers")
        return self

    def grid(self) -> list[float]:
        return [float(w) for w in np.linspace(self.omega_r_min, self.omega_r_max, self.points)]


class SnrSection(_Section):
    t1_us: float = Field(default=1.0, gt=0.0)
    eta: float = Field(default=1.0, gt=0.0, le=1.0)
    kappa_over_2chi: tuple[float, ...] = (0.5, 1.0, 1.5)
    chi_prime_target: float = Field(default=2.0, gt=0.0)
    omega_r_same: float = Field(default=4515.0, gt=0.0)
    omega_r_opposite: float = Field(default=7660.0, gt=0.0)
    n_bar_max: float | None = Field(default=None, gt=0.0)
    points: int = Field(default=200, ge=1)

    split_lists = field_validator("kappa_over_2chi", mode="before")(_split_list)

    @field_validator("kappa_over_2chi")
    @classmethod
    def _positive(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value or any(v <= 0 for v in value):
            raise ValueError("kappa_over_2chi values must be positive")
        return value


class ResponseSection(_Section):
    ladders: tuple[int, ...] = (2, 3, 6)
    levels: tuple[int, ...] = (0, 1, 2)
    directions: tuple[SweepDirection, ...] = (SweepDirection.UP, SweepDirection.DOWN)
    omega_m: float | None = None
    power_min: float = -20.0
    power_max: float = 60.0
    power_step: float = Field(default=0.25, gt=0.0)
    separation_threshold: float = Field(default=1000.0, gt=1.0)

    split_lists = field_validator("ladders", "levels", "directions", mode="before")(_split_list)

    @model_validator(mode="after")
    def _check(self) -> "ResponseSection":
        if self.power_max < self.power_min:
            raise ValueError("power_max must be >= power_min")
        if any(m < 2 for m in self.ladders):
            raise ValueError("ladders need at least 2 levels")
        if any(i < 0 for i in self.levels):
            raise ValueError("levels must be non-negative")
        return self

    def powers(self) -> list[float]:
        return _power_grid(self.power_min, self.power_max, self.power_step)


class MapSection(_Section):
    levels: tuple[int, ...] = (0, 1)
    omega_m_min: float = 6980.0
    omega_m_max: float = 7030.0
    omega_m_points: int = Field(default=51, ge=1)
    power_min: float = 0.0
    power_max: float = 60.0
    power_points: int = Field(default=61, ge=1)
    separation_threshold: float = Field(default=1000.0, gt=1.0)

    split_lists = field_validator("levels", mode="before")(_split_list)

    @model_validator(mode="after")
    def _check(self) -> "MapSection":
        if self.omega_m_max < self.omega_m_min or self.power_max < self.power_min:
            raise ValueError("grid maxima must not be below the minima")
        return self

    def omegas(self) -> list[float]:
        return [float(w) for w in np.linspace(self.omega_m_min, self.omega_m_max, self.omega_m_points)]

    def powers(self) -> list[float]:
        return [float(p) for p in np.linspace(self.power_min, self.power_max, self.power_points)]


class RatesSection(_Section):
    omega_m: float | None = None
    power_min: float = -20.0
    power_max: float = 60.0
    power_step: float = Field(default=0.5, gt=0.0)

    @model_validator(mode="after")
    def _check(self) -> "RatesSection":
        if self.power_max < self.power_min:
            raise ValueError("power_max must be >= power_min")
        return self

    def powers(self) -> list[float]:
        return _power_grid(self.power_min, self.power_max, self.power_step)


class DephasingSection(_Section):
    dispersions: tuple[float, ...] | None = None
    table: Literal["transmon", "exponential"] = "transmon"
    ej_over_ec: float | None = Field(default=None, gt=0.0)
    noise: Literal["one_over_f", "white"] = "one_over_f"
    white_level: float = Field(default=1.0, gt=0.0)

    split_lists = field_validator("dispersions", mode="before")(_split_list)

    def dispersion_table(self, spec: SystemSpec) -> tuple[float, ...]:
        """Explicit dispersions, else the chosen default table.

        The transmon table uses ej_over_ec, or the ladder's E_J/E_C when unset.
        """
        if self.dispersions is not None:
            return self.dispersions
        if self.table == "exponential":
            return exponential_charge_dispersions(spec.num_levels)
        ratio = self.ej_over_ec if self.ej_over_ec is not None else ej_over_ec_from_ladder(spec.mls.level_freqs)
        return default_charge_dispersions(spec.num_levels, ratio)

    def spectrum(self) -> NoiseSpectrum:
        if self.noise == "white":
            return WhiteNoise(level=self.white_level)
        return OneOverFNoise()


class SolverSection(_Section):
    damping: float | None = Field(default=None, gt=0.0, le=1.0)
    max_iterations: int | None = Field(default=None, ge=1)
    tolerance: float | None = Field(default=None, gt=0.0)
    max_halvings: int | None = Field(default=None, ge=0)
    acceleration: bool | None = None

    def options(self) -> SolverOptions:
        """Solver options; unset keys fall back to the process settings."""
        base = SolverOptions.from_settings()
        overrides = {k: v for k, v in self.model_dump().items() if v is not None}
        return base.model_copy(update=overrides)


class OutputSection(_Section):
    format: Literal["csv", "json"] | None = None
    prefix: str = ""


class OracleSection(_Section):
    jc_photons: tuple[int, ...] = (0, 1, 10, 1000, 1000000)
    photon_cutoff: int = Field(default=8, ge=0)
    level: int = Field(default=0, ge=0)
    omega_m: float | None = None
    power_min: float = 20.0
    power_max: float = 60.0
    power_step: float = Field(default=2.0, gt=0.0)
    scan_points: int = Field(default=4000, ge=10)

    split_lists = field_validator("jc_photons", mode="before")(_split_list)

    def powers(self) -> list[float]:
        return _power_grid(self.power_min, self.power_max, self.power_step)


SECTIONS: dict[str, type[_Section]] = {
    "system": SystemSection,
    "coeffs": CoeffsSection,
    "snr": SnrSection,
    "response": ResponseSection,
    "map": MapSection,
    "rates": RatesSection,
    "dephasing": DephasingSection,
    "solver": SolverSection,
    "output": OutputSection,
    "oracle": OracleSection,
}


class RunConfig(BaseModel):
    """Fully resolved run configuration."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    system: SystemSection = SystemSection()
    coeffs: CoeffsSection = CoeffsSection()
    snr: SnrSection = SnrSection()
    response: ResponseSection = ResponseSection()
    map: MapSection = MapSection()
    rates: RatesSection = RatesSection()
    dephasing: DephasingSection = DephasingSection()
    solver: SolverSection = SolverSection()
    output: OutputSection = OutputSection()
    oracle: OracleSection = OracleSection()

    def resolved_items(self) -> list[tuple[str, str]]:
        """Every setting as (section.key, text), solver defaults filled in."""
        items = []
        for name in SECTIONS:
            section = getattr(self, name)
            values = section.model_dump(mode="json")
            if name == "solver":
                values = self.solver.options().model_dump(mode="json")
            for key, value in values.items():
                items.append((f"{name}.{key}", _format_value(value)))
        return items


def _format_value(value) -> str:
    if value is None:
        return "default"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _line_index(text: str) -> dict[tuple[str, str | None], int]:
    """Map (section, key) and (section, None) to 1-based line numbers."""
    index: dict[tuple[str, str | None], int] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        match = _SECTION_LINE.match(line)
        if match:
            section = match.group("name").strip()
            index.setdefault((section, None), lineno)
            continue
        match = _KEY_LINE.match(line)
        if match and section is not None:
            index.setdefault((section, match.group("key").strip().lower()), lineno)
    return index


def load_run_config(path: str | Path) -> RunConfig:
    """Read and validate an INI run configuration.

    Args:
        path: Config file location.

    Returns:
        The validated RunConfig.

    Raises:
        ConfigError: With a "path:line:" prefix when an entry is invalid.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config: {e}") from e

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from e

    lines = _line_index(text)
    sections: dict[str, _Section] = {}
    for name in parser.sections():
        header_line = lines.get((name, None), 0)
        model = SECTIONS.get(name)
        if model is None:
            raise ConfigError(f"{path}:{header_line}: unknown section [{name}]")
        try:
            sections[name] = model.model_validate(dict(parser.items(name)))
        except ValidationError as e:
            error = e.errors()[0]
            key = str(error["loc"][0]) if error["loc"] else None
            line = lines.get((name, key), header_line)
            where = f"[{name}] {key}" if key else f"[{name}]"
            raise ConfigError(f"{path}:{line}: {where}: {error['msg']}") from e

    try:
        config = RunConfig(**sections)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e.errors()[0]['msg']}") from e
    logger.info(f"Loaded run config {path} ({len(sections)} sections)")
    return config
