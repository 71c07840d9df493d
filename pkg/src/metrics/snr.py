"""
Weak-driving readout quality: cavity pull, pointer separation and SNR.

The drive sits midway between the two pulled resonator frequencies, so the
pointer states of levels 0 and 1 see detunings ±δ/2. For a homodyne
measurement integrated over T₁ = 1/γ₁,

    |α₁ − α₀|² = n̄·δ² / [(δ/2)² + (κ/2)²],    SNR = η·κ·|α₁ − α₀|² / γ₁.

At κ = |δ| this gives SNR = 2ηn̄|δ|/γ₁, the optimum for a fixed pull.
"""

import logging
import math
from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, Field

from src.dispersive import DispersiveCoefficients
from src.model import ModelError

logger = logging.getLogger(__name__)


class SnrConfig(BaseModel):
    """Readout parameters shared by a family of SNR curves.

    Attributes:
        eta: Measurement efficiency η ∈ (0, 1].
        gamma_1: Qubit relaxation rate γ₁ = 1/T₁ (MHz).
        kappa_over_2chi: Resonator linewidth in units of 2|χ′|.
    """

    model_config = ConfigDict(frozen=True)

    eta: float = Field(default=1.0, gt=0.0, le=1.0)
    gamma_1: float = Field(..., gt=0.0)
    kappa_over_2chi: float = Field(default=0.5, gt=0.0)

    def kappa(self, chi_prime: float) -> float:
        """Linewidth κ = (κ/2χ′)·2|χ′| (MHz)."""
        return self.kappa_over_2chi * 2 * abs(chi_prime)


class SnrPoint(BaseModel):
    """SNR at one mean photon number."""

    model_config = ConfigDict(frozen=True)

    n_bar: float = Field(..., ge=0.0)
    delta: float
    alpha_sep_sq: float = Field(..., ge=0.0)
    snr: float = Field(..., ge=0.0)


def gamma_1_from_t1(t1_us: float) -> float:
    """Relaxation rate in the ordinary-frequency units of the model.

    Frequencies are f = ω/2π in MHz, so a lifetime T₁ in μs corresponds to
    γ₁ = 1/(2π·T₁) MHz.
    """
    if t1_us <= 0:
        raise ModelError(f"T1 must be positive, got {t1_us} us")
    return 1.0 / (2 * math.pi * t1_us)


def cavity_pull(coeffs: DispersiveCoefficients, n_bar: float) -> float:
    """Cavity pull δ = χ′ + ζ′·n̄ (MHz)."""
    if n_bar < 0:
        raise ModelError(f"mean photon number must be >= 0, got {n_bar}")
    return coeffs.chi_prime + coeffs.zeta_prime * n_bar


def pointer_separation(delta: float, kappa: float, n_bar: float) -> float:
    """|α₁ − α₀|² for a drive midway between the pulled frequencies."""
    denom = (0.5 * delta) ** 2 + (0.5 * kappa) ** 2
    if denom == 0:
        return 0.0
    return n_bar * delta**2 / denom


def snr_curve(
    coeffs: DispersiveCoefficients,
    cfg: SnrConfig,
    n_bars: Iterable[float],
) -> list[SnrPoint]:
    """SNR over a grid of mean photon numbers.

    Args:
        coeffs: Dispersive coefficients (χ′ sets κ, ζ′ bends the pull).
        cfg: Efficiency, relaxation rate and κ/2χ′.
        n_bars: Mean photon numbers n̄ ≥ 0.

    Returns:
        One SnrPoint per n̄, in input order.

    Raises:
        ModelError: If χ′ = 0 (κ would vanish) or some n̄ < 0.
    """
    if coeffs.chi_prime == 0:
        raise ModelError("chi' = 0 leaves the linewidth undefined")
    kappa = cfg.kappa(coeffs.chi_prime)

    points = []
    for n_bar in n_bars:
        delta = cavity_pull(coeffs, float(n_bar))
        sep = pointer_separation(delta, kappa, float(n_bar))
        points.append(
            SnrPoint(
                n_bar=float(n_bar),
                delta=delta,
                alpha_sep_sq=sep,
                snr=cfg.eta * kappa * sep / cfg.gamma_1,
            )
        )
    logger.debug(f"SNR curve: {len(points)} points, kappa={kappa:.4g} MHz")
    return points
