"""
Fourth-order dispersive coefficients of the MLS-resonator system.

In the dispersive frame H_s ≈ H̃₀ + Σ_i S_i Π_ii a†a + Σ_i K_i Π_ii (a†a)², with
ac-Stark coefficients S_i and Kerr coefficients K_i built from
χ_i = g_i²/Δ_i, λ_i = −g_i/Δ_i and the two-photon terms g_i⁽²⁾, λ_i⁽²⁾.
Quantities indexed outside the ladder [0, M−2] are zero.
"""

import logging
import math

from pydantic import BaseModel, ConfigDict

from src.model import SystemSpec, TwoPhotonResonanceError, detunings

logger = logging.getLogger(__name__)


class DispersiveCoefficients(BaseModel):
    """Dispersive coefficients of one system configuration.

    Attributes:
        chi: χ_i = g_i²/Δ_i (MHz), i = 0..M−2.
        lam: λ_i = −g_i/Δ_i.
        g2: Two-photon couplings g_i⁽²⁾ = λ_iλ_{i+1}(Δ_{i+1} − Δ_i) (MHz).
        lam2: λ_i⁽²⁾ = −g_i⁽²⁾/(Δ_{i+1} + Δ_i).
        stark: S_i for every level (MHz).
        kerr: K_i for every level (MHz).
        chi_prime: χ′ = S_1 − S_0 (MHz).
        zeta_prime: ζ′ = K_1 − K_0 (MHz).
        n_crit: Critical photon number 1/(4λ_0²) (inf when g_0 = 0).
    """

    model_config = ConfigDict(frozen=True)

    chi: tuple[float, ...]
    lam: tuple[float, ...]
    g2: tuple[float, ...]
    lam2: tuple[float, ...]
    stark: tuple[float, ...]
    kerr: tuple[float, ...]
    chi_prime: float
    zeta_prime: float
    n_crit: float

    @property
    def same_sign(self) -> bool:
        """True when χ′ and ζ′ are both non-zero with equal sign."""
        return self.chi_prime * self.zeta_prime > 0

    def scaled(self, factor: float) -> "DispersiveCoefficients":
        """Copy with χ′ and ζ′ multiplied by a common factor."""
        return self.model_copy(
            update={
                "chi_prime": self.chi_prime * factor,
                "zeta_prime": self.zeta_prime * factor,
            }
        )


def critical_photon_number(spec: SystemSpec) -> float:
    """Critical photon number n_crit = 1/(4λ_0²).

    Returns:
        n_crit, or math.inf when g_0 = 0 (the expansion never breaks down).
    """
    lam = detunings(spec).lam
    if not lam or lam[0] == 0:
        return math.inf
    return 1.0 / (4 * lam[0] ** 2)


class _Ladder:
    """Index helpers applying the out-of-ladder-is-zero convention."""

    def __init__(self, delta: tuple[float, ...], lam: tuple[float, ...], couplings: tuple[float, ...]):
        self.size = len(delta)
        self._delta = delta
        self._lam = lam
        self._chi = tuple(g**2 / d for g, d in zip(couplings, delta))

    def _inside(self, i: int) -> bool:
        return 0 <= i < self.size

    def chi(self, i: int) -> float:
        return self._chi[i] if self._inside(i) else 0.0

    def lam(self, i: int) -> float:
        return self._lam[i] if self._inside(i) else 0.0

    def g2(self, i: int) -> float:
        if not (self._inside(i) and self._inside(i + 1)):
            return 0.0
        return self._lam[i] * self._lam[i + 1] * (self._delta[i + 1] - self._delta[i])

    def lam2(self, i: int) -> float:
        g2 = self.g2(i)
        if g2 == 0.0:
            return 0.0
        denom = self._delta[i + 1] + self._delta[i]
        if denom == 0.0:
            raise TwoPhotonResonanceError(
                f"two-photon resonance on transitions {i}->{i + 2} (Δ_{i} + Δ_{i + 1} = 0)"
            )
        return -g2 / denom


def _stark(lad: _Ladder, i: int) -> float:
    chi, lam, g2, lam2 = lad.chi, lad.lam, lad.g2, lad.lam2
    second = chi(i - 1) * (1 - lam(i) ** 2) - chi(i) * (1 - lam(i - 1) ** 2) - 2 * chi(i - 1) * lam(i - 1) ** 2
    fourth = 0.25 * (
        9 * chi(i - 2) * lam(i - 1) ** 2
        - 3 * chi(i - 1) * lam(i - 2) ** 2
        - chi(i) * lam(i + 1) ** 2
        + 3 * chi(i + 1) * lam(i) ** 2
    )
    two_photon = -g2(i) * lam2(i) - 3 * g2(i - 2) * lam2(i - 2)
    return second + fourth + two_photon


def _kerr(lad: _Ladder, i: int) -> float:
    chi, lam, g2, lam2 = lad.chi, lad.lam, lad.g2, lad.lam2
    fourth = 0.25 * (
        3 * chi(i - 2) * lam(i - 1) ** 2
        - chi(i - 1) * lam(i - 2) ** 2
        + chi(i) * lam(i + 1) ** 2
        - 3 * chi(i + 1) * lam(i) ** 2
    )
    mixed = (chi(i) - chi(i - 1)) * (lam(i) ** 2 + lam(i - 1) ** 2)
    two_photon = g2(i) * lam2(i) - g2(i - 2) * lam2(i - 2)
    return fourth + mixed + two_photon


def analytic_coefficients(spec: SystemSpec) -> DispersiveCoefficients:
    """Evaluate the fourth-order ac-Stark and Kerr coefficients.

    Args:
        spec: The coupled system.

    Returns:
        DispersiveCoefficients with S_i, K_i for every level.

    Raises:
        ResonanceError: If some Δ_i = 0.
        TwoPhotonResonanceError: If Δ_i + Δ_{i+1} = 0 with g_i⁽²⁾ ≠ 0.

    Example:
        >>> from src.model import build_transmon_spec, SystemSpec
        >>> spec = SystemSpec(mls=build_transmon_spec(6000, 5750, 100, 2), omega_r=7000)
        >>> analytic_coefficients(spec).chi[0]
        -10.0
    """
    det = detunings(spec)
    lad = _Ladder(det.delta, det.lam, spec.mls.couplings)
    num_levels = spec.num_levels

    stark = tuple(_stark(lad, i) for i in range(num_levels))
    kerr = tuple(_kerr(lad, i) for i in range(num_levels))
    chi_prime = stark[1] - stark[0] if num_levels > 1 else 0.0
    zeta_prime = kerr[1] - kerr[0] if num_levels > 1 else 0.0

    coeffs = DispersiveCoefficients(
        chi=tuple(lad.chi(i) for i in range(lad.size)),
        lam=det.lam,
        g2=tuple(lad.g2(i) for i in range(lad.size)),
        lam2=tuple(lad.lam2(i) for i in range(lad.size)),
        stark=stark,
        kerr=kerr,
        chi_prime=chi_prime,
        zeta_prime=zeta_prime,
        n_crit=critical_photon_number(spec) if num_levels > 1 else math.inf,
    )
    logger.debug(
        f"Analytic coefficients at omega_r={spec.omega_r}: "
        f"chi'={chi_prime:.6g} zeta'={zeta_prime:.6g}"
    )
    return coeffs


def second_order_coefficients(spec: SystemSpec) -> DispersiveCoefficients:
    """Second-order baseline: S_i = χ_{i−1} − χ_i and no Kerr terms.

    For a two-level system the pull χ′ reduces to the constant 2g²/Δ.
    """
    det = detunings(spec)
    lad = _Ladder(det.delta, det.lam, spec.mls.couplings)
    num_levels = spec.num_levels
    stark = tuple(lad.chi(i - 1) - lad.chi(i) for i in range(num_levels))
    return DispersiveCoefficients(
        chi=tuple(lad.chi(i) for i in range(lad.size)),
        lam=det.lam,
        g2=tuple(0.0 for _ in range(lad.size)),
        lam2=tuple(0.0 for _ in range(lad.size)),
        stark=stark,
        kerr=tuple(0.0 for _ in range(num_levels)),
        chi_prime=stark[1] - stark[0] if num_levels > 1 else 0.0,
        zeta_prime=0.0,
        n_crit=critical_photon_number(spec) if num_levels > 1 else math.inf,
    )
