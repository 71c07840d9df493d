"""
Self-consistent steady-state photon number.

Solves n_i = ε²/([ω_ri(n_i) − ω_m]² + [κ/2]²) by damped fixed-point
iteration, n ← (1−β)n + β·F(n). Near the avalanche the iteration tends to
oscillate, so β is halved when the residual flips sign without shrinking.
In the dispersive tail n·(ω_ri − ω_r)² is almost constant and the contraction
rate approaches one; there Aitken extrapolation of three damped iterates is
tried and kept only when it lowers the residual.
"""

import logging
import math

from src.eigenblocks import BlockError, effective_frequency
from src.model import SystemSpec

from .models import Branch, DriveSpec, ResponsePoint, SolverOptions

logger = logging.getLogger(__name__)

# consecutive sign flips of the residual that count as a period-2 cycle
OSCILLATION_FLIPS = 3


class LorentzianResponse:
    """Right-hand side F(n) of the steady-state equation for one level."""

    def __init__(self, spec: SystemSpec, level: int, drive: DriveSpec):
        if not 0 <= level < spec.num_levels:
            raise BlockError(f"level {level} outside 0..{spec.num_levels - 1}")
        self.spec = spec
        self.level = level
        self.drive = drive
        self._eps2 = drive.epsilon**2
        self._half_kappa2 = (0.5 * spec.kappa) ** 2

    @property
    def ceiling(self) -> float:
        """Largest possible photon number, ε²/(κ/2)² (resonant linear cavity)."""
        return self._eps2 / self._half_kappa2

    def frequency(self, n: float) -> float:
        return effective_frequency(self.spec, self.level, n)

    def __call__(self, n: float) -> float:
        detuning = self.frequency(n) - self.drive.omega_m
        return self._eps2 / (detuning**2 + self._half_kappa2)

    def residual(self, n: float) -> float:
        """Signed defect F(n) − n."""
        return self(n) - n


def steady_state_photons(
    spec: SystemSpec,
    level: int,
    drive: DriveSpec,
    init: float = 0.0,
    options: SolverOptions | None = None,
    branch: Branch = Branch.LOW,
    power_db: float | None = None,
) -> ResponsePoint:
    """Solve the steady-state photon number of MLS level i.

    Args:
        spec: The coupled system.
        level: MLS level i the qubit sits in.
        drive: Drive amplitude and frequency.
        init: Starting photon number.
        options: Iteration controls; defaults from the process settings.
        branch: Tag stored on the result.
        power_db: Drive power tag stored on the result.

    Returns:
        ResponsePoint; converged is False when the iteration cap was hit.

    Raises:
        BlockError: If the level is outside the ladder.

    Example:
        >>> point = steady_state_photons(spec, 0, DriveSpec(epsilon=1.0, omega_m=7000))
        >>> point.converged
        True
    """
    opts = options or SolverOptions.from_settings()
    rhs = LorentzianResponse(spec, level, drive)

    if drive.epsilon == 0:
        return ResponsePoint(
            n=0.0,
            omega_ri=rhs.frequency(0.0),
            branch=branch,
            converged=True,
            residual=0.0,
            iterations=1,
            power_db=power_db,
        )

    n = max(float(init), 0.0)
    beta = opts.damping
    halvings = 0
    flips = 0
    prev_res: float | None = None
    history: list[float] = []
    converged = False
    res = rhs.residual(n)
    iterations = 0

    for iterations in range(1, opts.max_iterations + 1):
        res = rhs.residual(n)
        if abs(res) <= opts.tolerance * max(1.0, n):
            converged = True
            break

        if prev_res is not None and res * prev_res < 0 and abs(res) >= 0.9 * abs(prev_res):
            flips += 1
        else:
            flips = 0
        prev_res = res
        if flips >= OSCILLATION_FLIPS and halvings < opts.max_halvings:
            beta *= 0.5
            halvings += 1
            flips = 0
            history.clear()
            logger.debug(f"Halved damping to {beta} at n={n:.6g} (level {level})")

        n_next = max(n + beta * res, 0.0)

        if opts.acceleration:
            history.append(n_next)
            if len(history) == 3:
                n_next = _aitken(rhs, history, abs(res), n_next)
                history.clear()
        n = n_next

    if not converged:
        res = rhs.residual(n)
        logger.warning(
            f"No convergence for level {level} at epsilon={drive.epsilon:.6g}, "
            f"omega_m={drive.omega_m}: residual {abs(res):.3g} after {iterations} iterations"
        )

    return ResponsePoint(
        n=n,
        omega_ri=rhs.frequency(n),
        branch=branch,
        converged=converged,
        residual=abs(res),
        iterations=iterations,
        power_db=power_db,
    )


def _aitken(rhs: LorentzianResponse, history: list[float], current: float, fallback: float) -> float:
    """Aitken Δ² candidate from three damped iterates, if it improves the defect."""
    x0, x1, x2 = history
    denom = x2 - 2 * x1 + x0
    if denom == 0:
        return fallback
    candidate = x0 - (x1 - x0) ** 2 / denom
    if not math.isfinite(candidate) or candidate < 0:
        return fallback
    if abs(rhs.residual(candidate)) < current:
        return candidate
    return fallback
