"""
QND-degradation rates of a driven readout, from dressed matrix elements.

Every rate is a ratio to its bare counterpart and is evaluated on the
integer excitation blocks around the dressed state |bar(n,1)⟩, which lives
in block N_tot = n+1 under label 1:

* Purcell: photon loss a maps block n+1 into block n.
* Dressed decay: the MLS lowering operator Σ_− maps block n+1 into block n
  keeping the photon number.
* Dressed dephasing: the charge operator Σ_z stays inside block n+1 and is
  weighted by the noise spectrum at the dressed detuning.

Transitions into labels 0 and 1 are the qubit error and the no-flip channel;
every other label is leakage out of the qubit subspace.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.eigenblocks import DressedBlock, dressed_block
from src.model import (
    ModelError,
    SystemSpec,
    default_charge_dispersions,
    ej_over_ec_from_ladder,
    lowering_elements,
    sigma_minus_elements,
    sigma_z_elements,
)
from src.response import SolverOptions, SweepDirection, power_sweep

from .noise import NoiseSpectrum, OneOverFNoise

logger = logging.getLogger(__name__)


class NormalizationError(ModelError):
    """Raised when Σ_− would be normalised by a vanishing g_0."""

    pass


class RatePair(NamedTuple):
    """Qubit-error rate and leakage rate, both relative to the bare rate."""

    rate: float
    leakage: float


class RateRow(BaseModel):
    """All rate ratios at one drive power."""

    model_config = ConfigDict(frozen=True)

    power_db: float
    n_photons: int = Field(..., ge=0)
    converged: bool
    gamma_kappa: float = Field(..., ge=0.0)
    gamma_kappa_leak: float = Field(..., ge=0.0)
    gamma_1d: float = Field(..., ge=0.0)
    gamma_1d_leak: float = Field(..., ge=0.0)
    gamma_d: float = Field(..., ge=0.0)
    gamma_d_leak: float = Field(..., ge=0.0)


class RateTable(BaseModel):
    """Rate ratios over a power grid at one measurement frequency."""

    model_config = ConfigDict(frozen=True)

    omega_m: float
    rows: tuple[RateRow, ...]

    def column(self, name: str) -> list[float]:
        return [getattr(row, name) for row in self.rows]

    @property
    def all_converged(self) -> bool:
        return all(row.converged for row in self.rows)


def _pair(amplitudes: np.ndarray, weights: np.ndarray | None = None) -> RatePair:
    probs = amplitudes**2
    if weights is not None:
        probs = probs * weights
    return RatePair(rate=float(probs[0]), leakage=float(probs[2:].sum()))


def _check_photons(n: int) -> int:
    if n < 0 or int(n) != n:
        raise ModelError(f"rates need an integer photon number >= 0, got {n}")
    return int(n)


def _blocks(spec: SystemSpec, n: int) -> tuple[DressedBlock, DressedBlock]:
    if spec.num_levels < 2:
        raise ModelError("qubit rates need at least two levels")
    return dressed_block(spec, n), dressed_block(spec, n + 1)


def lowering_amplitudes(spec: SystemSpec, n: int) -> np.ndarray:
    """⟨bar(n−i, i)| a |bar(n,1)⟩ for every label i of block n."""
    n = _check_photons(n)
    target, source = _blocks(spec, n)
    op = lowering_elements(n + 1, spec.num_levels)
    return target.vectors.T @ op @ source.vectors[:, 1]


def photon_number(spec: SystemSpec, n: int) -> float:
    """⟨bar(n,1)| a†a |bar(n,1)⟩."""
    n = _check_photons(n)
    source = dressed_block(spec, n + 1)
    photons = np.array([n + 1 - k for k in range(source.block.dim)], dtype=float)
    return float(np.sum(photons * source.vectors[:, 1] ** 2))


def purcell_rates(spec: SystemSpec, n: int) -> RatePair:
    """Purcell decay γ_κ/κ and its leakage companion at photon number n.

    Args:
        spec: The coupled system (M ≥ 2).
        n: Photon number of the dressed state |bar(n,1)⟩.

    Returns:
        RatePair of |⟨bar(n,0)|a|bar(n,1)⟩|² and the sum over labels ≥ 2.

    At n = 0 and weak coupling the rate approaches λ₀².
    """
    return _pair(lowering_amplitudes(spec, n))


def dressed_decay_rates(spec: SystemSpec, n: int) -> RatePair:
    """Dressed decay γ_1d/γ₁ and its leakage companion at photon number n.

    Raises:
        NormalizationError: If g_0 = 0.
    """
    n = _check_photons(n)
    if spec.mls.couplings[0] == 0:
        raise NormalizationError("dressed decay is normalised by g_0, which is zero")
    target, source = _blocks(spec, n)
    full = sigma_minus_elements(spec.num_levels, spec.mls.couplings)
    op = full[: target.block.dim, : source.block.dim]
    return _pair(target.vectors.T @ op @ source.vectors[:, 1])


def dressed_detunings(spec: SystemSpec, n: int) -> np.ndarray:
    """Δ̄_{1i} = Ē_{n,1} − Ē_{n+1−i,i} for every label i of block n+1 (MHz)."""
    n = _check_photons(n)
    energies = dressed_block(spec, n + 1).relative_energies
    return energies[1] - energies


def dressed_dephasing_rates(
    spec: SystemSpec,
    n: int,
    dispersions: Sequence[float] | None = None,
    noise: NoiseSpectrum | None = None,
) -> RatePair:
    """Dressed dephasing γ_d/γ_φ and its leakage companion at photon number n.

    Args:
        spec: The coupled system (M ≥ 2).
        n: Photon number of the dressed state |bar(n,1)⟩.
        dispersions: Charge dispersions ε_i (defaults to the transmon table at
            the ladder's E_J/E_C).
        noise: Noise spectrum (defaults to 1/f).

    Returns:
        RatePair weighted by S(Δ̄)/S(1 Hz).

    Raises:
        SpectrumError: If the spectrum is undefined at some needed Δ̄.
    """
    n = _check_photons(n)
    if spec.num_levels < 2:
        raise ModelError("qubit rates need at least two levels")
    if dispersions is not None:
        table = tuple(dispersions)
    else:
        table = default_charge_dispersions(spec.num_levels, ej_over_ec_from_ladder(spec.mls.level_freqs))
    spectrum = noise if noise is not None else OneOverFNoise()

    block = dressed_block(spec, n + 1)
    dim = block.block.dim
    op = sigma_z_elements(spec.num_levels, table)[:dim, :dim]
    amplitudes = block.vectors.T @ op @ block.vectors[:, 1]

    gaps = block.relative_energies[1] - block.relative_energies
    weights = np.zeros(dim)
    for i in range(dim):
        if i != 1:
            weights[i] = spectrum.ratio(float(gaps[i]))
    return _pair(amplitudes, weights)


def _row(
    point: tuple[float, float, bool],
    spec: SystemSpec,
    dispersions: tuple[float, ...] | None,
    noise: NoiseSpectrum | None,
) -> RateRow:
    power, n_exact, converged = point
    n = int(round(n_exact))
    kappa = purcell_rates(spec, n)
    decay = dressed_decay_rates(spec, n)
    dephasing = dressed_dephasing_rates(spec, n, dispersions, noise)
    return RateRow(
        power_db=power,
        n_photons=n,
        converged=converged,
        gamma_kappa=kappa.rate,
        gamma_kappa_leak=kappa.leakage,
        gamma_1d=decay.rate,
        gamma_1d_leak=decay.leakage,
        gamma_d=dephasing.rate,
        gamma_d_leak=dephasing.leakage,
    )


def rates_vs_power(
    spec: SystemSpec,
    omega_m: float,
    powers: Sequence[float],
    dispersions: Sequence[float] | None = None,
    noise: NoiseSpectrum | None = None,
    options: SolverOptions | None = None,
    workers: int = 1,
) -> RateTable:
    """Evaluate all rate pairs along an up-sweep of the excited state.

    The photon number at each power comes from the hysteresis up-sweep of
    level 1 and is rounded to the nearest integer block. The sweep is
    sequential; the rate evaluations are independent and may run in worker
    processes.

    Args:
        spec: The coupled system.
        omega_m: Measurement frequency (MHz).
        powers: Increasing drive powers (dB).
        dispersions: Charge dispersions ε_i.
        noise: Low-frequency noise spectrum.
        options: Solver controls for the sweep.
        workers: Worker processes for the rate evaluations.

    Returns:
        RateTable with one row per power.
    """
    curve = power_sweep(spec, 1, omega_m, powers, SweepDirection.UP, options)
    points = [(p.power_db, p.n, p.converged) for p in curve.points]
    table = tuple(dispersions) if dispersions is not None else None
    evaluate = partial(_row, spec=spec, dispersions=table, noise=noise)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate, points))
    else:
        rows = [evaluate(p) for p in points]

    logger.info(f"Rates over {len(rows)} powers at omega_m={omega_m}, max n={max(r.n_photons for r in rows)}")
    return RateTable(omega_m=omega_m, rows=tuple(rows))
