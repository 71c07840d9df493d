"""
Numerical χ′ and ζ′ from exact dressed energies.

The exact pull δ(n) = ω_r1(n) − ω_r0(n) is fitted on a few low photon
numbers with the form the dispersive Hamiltonian predicts between adjacent
Fock levels, δ(n) = χ′ + ζ′(2n + 1).
"""

import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.eigenblocks import effective_frequency
from src.model import ModelError, SystemSpec

logger = logging.getLogger(__name__)

DEFAULT_FIT_PHOTONS = (0, 1, 2, 3, 4)

# fits worse than this fraction of |δ(0)| are flagged
ILL_CONDITIONED_FRACTION = 0.1


class NumericCoefficients(BaseModel):
    """Fitted pull coefficients.

    Attributes:
        chi_prime: Fitted χ′ (MHz).
        zeta_prime: Fitted ζ′ (MHz).
        pulls: Exact δ(n) on the fit photons (MHz).
        residual: Largest absolute fit defect (MHz).
        ill_conditioned: Fit defect above 10% of |δ(0)|, as happens near
            divergences of the dispersive expansion.
    """

    model_config = ConfigDict(frozen=True)

    chi_prime: float
    zeta_prime: float
    pulls: tuple[float, ...]
    residual: float
    ill_conditioned: bool


def exact_pull(spec: SystemSpec, n: float) -> float:
    """Exact cavity pull δ(n) = ω_r1(n) − ω_r0(n) (MHz)."""
    return effective_frequency(spec, 1, n) - effective_frequency(spec, 0, n)


def chi_zeta_numeric(
    spec: SystemSpec,
    fit_photons: Sequence[int] = DEFAULT_FIT_PHOTONS,
) -> NumericCoefficients:
    """Fit χ′ and ζ′ to the exact cavity pull.

    Args:
        spec: The coupled system (M ≥ 2).
        fit_photons: Integer photon numbers entering the least-squares fit
            (at least two distinct values).

    Returns:
        NumericCoefficients with the fit and its quality flag.

    Raises:
        ModelError: If M < 2 or fewer than two fit photons are given.
    """
    if spec.num_levels < 2:
        raise ModelError("the cavity pull needs at least two levels")
    photons = np.array(sorted(set(int(n) for n in fit_photons)), dtype=float)
    if len(photons) < 2:
        raise ModelError("the pull fit needs at least two photon numbers")

    pulls = np.array([exact_pull(spec, n) for n in photons])
    design = np.column_stack([np.ones_like(photons), 2 * photons + 1])
    (chi_prime, zeta_prime), *_ = np.linalg.lstsq(design, pulls, rcond=None)

    residual = float(np.max(np.abs(design @ np.array([chi_prime, zeta_prime]) - pulls)))
    ill = residual > ILL_CONDITIONED_FRACTION * abs(pulls[0])
    if ill:
        logger.warning(
            f"Ill-conditioned pull fit at omega_r={spec.omega_r}: residual {residual:.3g} MHz"
        )

    return NumericCoefficients(
        chi_prime=float(chi_prime),
        zeta_prime=float(zeta_prime),
        pulls=tuple(pulls.tolist()),
        residual=residual,
        ill_conditioned=bool(ill),
    )
