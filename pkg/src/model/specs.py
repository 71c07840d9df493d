"""
Physical parameterization of the qubit-resonator system.

Pydantic models for the M-level system (MLS) ladder and the resonator it is
coupled to. All frequencies and rates are ordinary frequencies in MHz
(the values quoted as ω/2π), so formulas carry no factors of 2π.
"""

import logging
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class ModelError(Exception):
    """Raised when system parameters are unusable for the requested quantity."""

    pass


class ResonanceError(ModelError):
    """Raised when an MLS transition is exactly resonant with the resonator."""

    pass


class TwoPhotonResonanceError(ModelError):
    """Raised when Δ_i + Δ_{i+1} = 0 while the two-photon coupling is non-zero."""

    pass


class MlsSpec(BaseModel):
    """M-level system ladder.

    Attributes:
        level_freqs: Level frequencies ω_i in MHz, ω_0 = 0 by convention.
        couplings: Ladder couplings g_i (i ↔ i+1 transition) in MHz.
    """

    model_config = ConfigDict(frozen=True)

    level_freqs: tuple[float, ...] = Field(..., min_length=1, description="ω_i (MHz)")
    couplings: tuple[float, ...] = Field(default=(), description="g_i (MHz)")

    @model_validator(mode="after")
    def _check_ladder(self) -> "MlsSpec":
        if len(self.couplings) != len(self.level_freqs) - 1:
            raise ValueError(
                f"expected {len(self.level_freqs) - 1} couplings for "
                f"{len(self.level_freqs)} levels, got {len(self.couplings)}"
            )
        if any(g < 0 or not math.isfinite(g) for g in self.couplings):
            raise ValueError("couplings must be finite and non-negative")
        if any(not math.isfinite(w) for w in self.level_freqs):
            raise ValueError("level frequencies must be finite")
        if any(b <= a for a, b in zip(self.level_freqs, self.level_freqs[1:])):
            raise ValueError("level frequencies must be strictly increasing")
        return self

    @property
    def num_levels(self) -> int:
        """Number of MLS levels M."""
        return len(self.level_freqs)

    @property
    def transition_freqs(self) -> tuple[float, ...]:
        """Transition frequencies ω_{i+1} − ω_i."""
        return tuple(b - a for a, b in zip(self.level_freqs, self.level_freqs[1:]))


class SystemSpec(BaseModel):
    """MLS coupled to a single resonator mode.

    Attributes:
        mls: The M-level system.
        omega_r: Bare resonator frequency (MHz).
        kappa: Resonator decay rate κ (MHz).
    """

    model_config = ConfigDict(frozen=True)

    mls: MlsSpec
    omega_r: float = Field(..., gt=0.0, description="Resonator frequency (MHz)")
    kappa: float = Field(default=1.0, gt=0.0, description="Resonator decay rate (MHz)")

    @property
    def num_levels(self) -> int:
        return self.mls.num_levels

    def with_omega_r(self, omega_r: float) -> "SystemSpec":
        """Copy of this system with another resonator frequency."""
        return SystemSpec(mls=self.mls, omega_r=omega_r, kappa=self.kappa)

    def with_kappa(self, kappa: float) -> "SystemSpec":
        """Copy of this system with another resonator linewidth."""
        return SystemSpec(mls=self.mls, omega_r=self.omega_r, kappa=kappa)


class Detunings(BaseModel):
    """Ladder detunings and dispersive parameters.

    Attributes:
        delta: Δ_i = (ω_{i+1} − ω_i) − ω_r (MHz).
        lam: λ_i = −g_i/Δ_i (dimensionless).
    """

    model_config = ConfigDict(frozen=True)

    delta: tuple[float, ...]
    lam: tuple[float, ...]


def build_transmon_spec(
    omega_10: float,
    omega_21: float,
    g0: float,
    num_levels: int,
) -> MlsSpec:
    """Build a transmon-like ladder with constant anharmonicity.

    Levels follow ω_i = i·ω_10 + α·i(i−1)/2 with α = ω_21 − ω_10, and the
    couplings scale as g_i = g0·√(i+1).

    Args:
        omega_10: 0 ↔ 1 transition frequency (MHz).
        omega_21: 1 ↔ 2 transition frequency (MHz).
        g0: Coupling of the 0 ↔ 1 transition (MHz).
        num_levels: Number of levels M (≥ 2).

    Returns:
        The MLS ladder.

    Raises:
        ModelError: If M < 2, an input is non-positive, or the ladder stops
            increasing within M levels.

    Example:
        >>> mls = build_transmon_spec(6000, 5750, 100, 6)
        >>> mls.level_freqs[2]
        11750.0
    """
    if num_levels < 2:
        raise ModelError(f"transmon ladder needs at least 2 levels, got {num_levels}")
    if omega_10 <= 0 or omega_21 <= 0 or g0 <= 0:
        raise ModelError("omega_10, omega_21 and g0 must be positive")

    alpha = omega_21 - omega_10
    levels = tuple(i * omega_10 + alpha * i * (i - 1) / 2 for i in range(num_levels))
    couplings = tuple(g0 * math.sqrt(i + 1) for i in range(num_levels - 1))

    try:
        return MlsSpec(level_freqs=levels, couplings=couplings)
    except ValueError as e:
        raise ModelError(f"anharmonicity {alpha} MHz folds the ladder within {num_levels} levels") from e


def detunings(spec: SystemSpec) -> Detunings:
    """Compute the ladder detunings Δ_i and dispersive ratios λ_i.

    Args:
        spec: The coupled system.

    Returns:
        Detunings for every transition i ∈ [0, M−2].

    Raises:
        ResonanceError: If some transition is exactly resonant (Δ_i = 0).
    """
    delta = tuple(w - spec.omega_r for w in spec.mls.transition_freqs)
    for i, d in enumerate(delta):
        if d == 0.0:
            raise ResonanceError(
                f"transition {i}<->{i + 1} is resonant with the resonator at {spec.omega_r} MHz"
            )
    lam = tuple(-g / d for g, d in zip(spec.mls.couplings, delta))
    return Detunings(delta=delta, lam=lam)
