"""Dispersive module - ac-Stark and Kerr coefficients, analytic and numeric."""

from .coefficients import (
    DispersiveCoefficients,
    analytic_coefficients,
    critical_photon_number,
    second_order_coefficients,
)
from .numeric import NumericCoefficients, chi_zeta_numeric, exact_pull

__all__ = [
    "DispersiveCoefficients",
    "NumericCoefficients",
    "analytic_coefficients",
    "chi_zeta_numeric",
    "critical_photon_number",
    "exact_pull",
    "second_order_coefficients",
]
