"""
Power sweeps, power-frequency maps and branch diagnostics.

Power sweeps follow the hysteresis protocol: each point is seeded with the
previous solution, so an up-sweep stays on the low branch until it ceases to
exist and a down-sweep stays on the high branch. Map cells are independent
and may be solved in worker processes; results are assembled in grid order
so the output does not depend on the schedule.
"""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from src.model import SystemSpec

from .models import (
    Branch,
    DriveSpec,
    ResponseCurve,
    ResponsePoint,
    SolverOptions,
    SweepDirection,
    power_to_epsilon,
)
from .solver import LorentzianResponse, steady_state_photons

logger = logging.getLogger(__name__)


class SweepError(Exception):
    """Raised when a sweep grid is unusable."""

    pass


@dataclass(frozen=True)
class ResponseMap:
    """Photon number n_i over a (power, ω_m) grid.

    Attributes:
        level: MLS level i.
        powers: Power axis (dB, rows).
        omega_m: Measurement-frequency axis (MHz, columns).
        photons: n_i, shape (len(powers), len(omega_m)).
        ridge: ω_ri(n_i) at every cell, the overlay line of the map.
        converged: Convergence flag per cell.
    """

    level: int
    powers: np.ndarray
    omega_m: np.ndarray
    photons: np.ndarray
    ridge: np.ndarray
    converged: np.ndarray


@dataclass(frozen=True)
class FixedPointScan:
    """Brute-force count of steady-state solutions.

    Attributes:
        count: Number of sign changes of F(n) − n on the scan grid.
        brackets: (n_lo, n_hi) around every sign change.
    """

    count: int
    brackets: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class SeparationWindow:
    """Contiguous power range where two curves differ by a large ratio."""

    low_db: float
    high_db: float
    peak_db: float
    peak_ratio: float

    @property
    def width_db(self) -> float:
        return self.high_db - self.low_db


def power_sweep(
    spec: SystemSpec,
    level: int,
    omega_m: float,
    powers: Sequence[float],
    direction: SweepDirection = SweepDirection.UP,
    options: SolverOptions | None = None,
) -> ResponseCurve:
    """Sweep the drive power seeding each point with the previous solution.

    Args:
        spec: The coupled system.
        level: MLS level i.
        omega_m: Measurement frequency (MHz).
        powers: Power grid in dB, sorted in the sweep direction.
        direction: UP starts from the empty cavity, DOWN from the
            linear-cavity ceiling at the highest power.
        options: Solver controls.

    Returns:
        ResponseCurve with points in increasing power order.

    Raises:
        SweepError: If the grid is empty or not strictly monotone in the
            sweep direction.
    """
    grid = [float(p) for p in powers]
    if not grid:
        raise SweepError("power grid is empty")
    step_sign = 1 if direction == SweepDirection.UP else -1
    if any((b - a) * step_sign <= 0 for a, b in zip(grid, grid[1:])):
        raise SweepError(f"power grid must be strictly {'increasing' if step_sign > 0 else 'decreasing'}")

    opts = options or SolverOptions.from_settings()
    branch = Branch.LOW if direction == SweepDirection.UP else Branch.HIGH
    logger.info(
        f"Power sweep {direction.value} for level {level}: {len(grid)} points "
        f"from {grid[0]:.2f} to {grid[-1]:.2f} dB at omega_m={omega_m}"
    )

    seed: float | None = None
    points: list[ResponsePoint] = []
    for power in grid:
        drive = DriveSpec(epsilon=power_to_epsilon(power, spec.kappa), omega_m=omega_m)
        if seed is None:
            seed = 0.0 if branch == Branch.LOW else LorentzianResponse(spec, level, drive).ceiling
        point = steady_state_photons(spec, level, drive, init=seed, options=opts, branch=branch, power_db=power)
        points.append(point)
        seed = point.n

    if direction == SweepDirection.DOWN:
        grid.reverse()
        points.reverse()
    return ResponseCurve(
        level=level,
        omega_m=omega_m,
        direction=direction,
        powers=tuple(grid),
        points=tuple(points),
    )


def _solve_row(
    power: float,
    spec: SystemSpec,
    level: int,
    omegas: tuple[float, ...],
    options: SolverOptions,
) -> list[ResponsePoint]:
    eps = power_to_epsilon(power, spec.kappa)
    return [
        steady_state_photons(spec, level, DriveSpec(epsilon=eps, omega_m=w), options=options, power_db=power)
        for w in omegas
    ]


def frequency_power_map(
    spec: SystemSpec,
    level: int,
    omega_m_grid: Sequence[float],
    powers: Sequence[float],
    options: SolverOptions | None = None,
    workers: int = 1,
) -> ResponseMap:
    """Low-branch photon number on a power × measurement-frequency grid.

    Args:
        spec: The coupled system.
        level: MLS level i.
        omega_m_grid: Measurement frequencies (MHz).
        powers: Drive powers (dB).
        options: Solver controls.
        workers: Worker processes for the rows (1 solves in-process).

    Returns:
        ResponseMap including the ω_ri(n_i) ridge.
    """
    if len(omega_m_grid) == 0 or len(powers) == 0:
        raise SweepError("map grids must be non-empty")
    opts = options or SolverOptions.from_settings()
    omegas = tuple(float(w) for w in omega_m_grid)
    rows_in = [float(p) for p in powers]
    solve = partial(_solve_row, spec=spec, level=level, omegas=omegas, options=opts)

    logger.info(f"Response map for level {level}: {len(rows_in)}x{len(omegas)} cells, {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve, rows_in))
    else:
        rows = [solve(p) for p in rows_in]

    return ResponseMap(
        level=level,
        powers=np.array(rows_in),
        omega_m=np.array(omegas),
        photons=np.array([[p.n for p in row] for row in rows]),
        ridge=np.array([[p.omega_ri for p in row] for row in rows]),
        converged=np.array([[p.converged for p in row] for row in rows]),
    )


def fixed_point_multiplicity(
    spec: SystemSpec,
    level: int,
    drive: DriveSpec,
    points: int = 4000,
    n_min: float = 1e-6,
    n_max: float | None = None,
) -> FixedPointScan:
    """Count steady-state solutions by scanning the sign of F(n) − n.

    The scan runs over n = 0 and a log-spaced grid up to just above the
    linear-cavity ceiling, beyond which F(n) < n always holds.

    Args:
        spec: The coupled system.
        level: MLS level i.
        drive: Drive amplitude and frequency.
        points: Log-grid size.
        n_min: Smallest non-zero photon number on the grid.
        n_max: Upper end of the scan; defaults past the ceiling.

    Returns:
        FixedPointScan with the count and brackets.
    """
    rhs = LorentzianResponse(spec, level, drive)
    if drive.epsilon == 0:
        return FixedPointScan(count=1, brackets=((0.0, 0.0),))
    upper = n_max if n_max is not None else 1.01 * rhs.ceiling + 1.0
    grid = np.concatenate([[0.0], np.geomspace(n_min, upper, points)])
    values = np.array([rhs.residual(float(n)) for n in grid])
    signs = np.sign(values)
    brackets = tuple(
        (float(grid[k]), float(grid[k + 1]))
        for k in range(len(grid) - 1)
        if signs[k] != 0 and signs[k] != signs[k + 1]
    )
    return FixedPointScan(count=len(brackets), brackets=brackets)


def bistable_window(up: ResponseCurve, down: ResponseCurve, rel_tol: float = 1e-3) -> list[float]:
    """Powers where up- and down-sweep disagree.

    Args:
        up: Curve from an UP sweep.
        down: Curve from a DOWN sweep over the same powers.
        rel_tol: Relative disagreement counted as two distinct solutions.

    Returns:
        Sorted list of powers inside the hysteresis loop.
    """
    if up.powers != down.powers:
        raise SweepError("bistability needs both sweeps on the same power grid")
    out = []
    for power, a, b in zip(up.powers, up.points, down.points):
        if abs(a.n - b.n) > rel_tol * max(1.0, a.n, b.n):
            out.append(power)
    return out


def avalanche_power(curve: ResponseCurve) -> float:
    """Power reached by the largest single-step increase of log n.

    Returns:
        The power after the steepest step; NaN for fewer than two points.
    """
    if len(curve.points) < 2:
        return math.nan
    logs = np.log10(np.maximum(np.array(curve.photons), 1e-300))
    k = int(np.argmax(np.diff(logs)))
    return curve.powers[k + 1]


def ratio_window(
    powers: Sequence[float],
    photons_a: Sequence[float],
    photons_b: Sequence[float],
    ratio_threshold: float,
) -> SeparationWindow | None:
    """Largest-ratio window where max(n_a, n_b)/min(n_a, n_b) ≥ threshold.

    Args:
        powers: Power grid (dB), in either sweep order.
        photons_a: Photon numbers of the first state on that grid.
        photons_b: Photon numbers of the second state.
        ratio_threshold: Ratio that counts as separated.

    Returns:
        The contiguous window around the peak ratio, or None if the threshold
        is never reached.
    """
    if not len(powers) == len(photons_a) == len(photons_b):
        raise SweepError("photon numbers must share the power grid")
    if len(powers) == 0:
        return None
    order = np.argsort(np.asarray(powers, dtype=float), kind="stable")
    grid = np.asarray(powers, dtype=float)[order]
    na = np.asarray(photons_a, dtype=float)[order]
    nb = np.asarray(photons_b, dtype=float)[order]
    ratio = np.maximum(na, nb) / np.maximum(np.minimum(na, nb), 1e-300)
    peak = int(np.argmax(ratio))
    if ratio[peak] < ratio_threshold:
        return None
    start = peak
    while start > 0 and ratio[start - 1] >= ratio_threshold:
        start -= 1
    stop = peak
    while stop < len(ratio) - 1 and ratio[stop + 1] >= ratio_threshold:
        stop += 1
    return SeparationWindow(
        low_db=float(grid[start]),
        high_db=float(grid[stop]),
        peak_db=float(grid[peak]),
        peak_ratio=float(ratio[peak]),
    )


def separation_window(a: ResponseCurve, b: ResponseCurve, ratio_threshold: float) -> SeparationWindow | None:
    """ratio_window of two sweeps over the same power grid."""
    if a.powers != b.powers:
        raise SweepError("curves must share the power grid")
    return ratio_window(a.powers, a.photons, b.photons, ratio_threshold)
