"""
Pydantic models for steady-state resonator response.

Drive power is reported in dB relative to ε_ref = κ/2, i.e.
power_dB = 20·log₁₀(ε/ε_ref), so 0 dB puts one photon in a resonantly driven
linear cavity.
"""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import get_settings


class Branch(str, Enum):
    """Which initialization a solution was grown from."""

    LOW = "low"
    HIGH = "high"


class SweepDirection(str, Enum):
    """Power sweep direction for the hysteresis protocol."""

    UP = "up"
    DOWN = "down"


class DriveSpec(BaseModel):
    """Measurement drive.

    Attributes:
        epsilon: Drive amplitude ε (MHz).
        omega_m: Measurement frequency ω_m (MHz).
    """

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(..., ge=0.0, description="Drive amplitude (MHz)")
    omega_m: float = Field(..., description="Measurement frequency (MHz)")


class SolverOptions(BaseModel):
    """Damped fixed-point iteration controls.

    Attributes:
        damping: Initial mixing factor β.
        max_iterations: Iteration cap per solve.
        tolerance: Relative residual tolerance (× max(1, n)).
        max_halvings: How many times β may be halved on oscillation.
        acceleration: Apply Aitken Δ² extrapolation when it lowers the residual.
    """

    model_config = ConfigDict(frozen=True)

    damping: float = Field(default=0.5, gt=0.0, le=1.0)
    max_iterations: int = Field(default=100_000, ge=1)
    tolerance: float = Field(default=1e-10, gt=0.0)
    max_halvings: int = Field(default=4, ge=0)
    acceleration: bool = True

    @classmethod
    def from_settings(cls) -> "SolverOptions":
        """Build options from the process settings."""
        settings = get_settings()
        return cls(
            damping=settings.solver_damping,
            max_iterations=settings.solver_max_iterations,
            tolerance=settings.solver_tolerance,
            max_halvings=settings.solver_max_halvings,
            acceleration=settings.solver_acceleration,
        )


class ResponsePoint(BaseModel):
    """One steady-state solution.

    Attributes:
        n: Steady photon number n_i.
        omega_ri: Effective resonator frequency ω_ri(n_i) (MHz).
        branch: Initialization the solution was grown from.
        converged: Whether the residual tolerance was met.
        residual: |n − ε²/([ω_ri(n) − ω_m]² + [κ/2]²)| at the returned n.
        iterations: Fixed-point iterations used.
        power_db: Drive power of the solve, when it came from a sweep.
    """

    model_config = ConfigDict(frozen=True)

    n: float = Field(..., ge=0.0)
    omega_ri: float
    branch: Branch = Branch.LOW
    converged: bool
    residual: float
    iterations: int
    power_db: float | None = None


class ResponseCurve(BaseModel):
    """Steady-state photon number of one MLS level over a power grid.

    Points are stored in increasing power order whatever the sweep
    direction; the direction tag records how they were seeded.
    """

    model_config = ConfigDict(frozen=True)

    level: int
    omega_m: float
    direction: SweepDirection
    powers: tuple[float, ...]
    points: tuple[ResponsePoint, ...]

    @model_validator(mode="after")
    def _check_grid(self) -> "ResponseCurve":
        if len(self.powers) != len(self.points):
            raise ValueError("one point per power is required")
        if any(b <= a for a, b in zip(self.powers, self.powers[1:])):
            raise ValueError("powers must be strictly increasing")
        return self

    @property
    def photons(self) -> list[float]:
        return [p.n for p in self.points]

    @property
    def frequencies(self) -> list[float]:
        return [p.omega_ri for p in self.points]

    @property
    def all_converged(self) -> bool:
        return all(p.converged for p in self.points)


def power_to_epsilon(power_db: float, kappa: float) -> float:
    """Drive amplitude ε (MHz) for a power in dB relative to κ/2."""
    return 0.5 * kappa * 10 ** (power_db / 20)


def epsilon_to_power(epsilon: float, kappa: float) -> float:
    """Power in dB relative to κ/2 for a drive amplitude ε (MHz)."""
    if epsilon <= 0:
        return -math.inf
    return 20 * math.log10(epsilon / (0.5 * kappa))
