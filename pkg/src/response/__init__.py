"""Response module - steady-state photon number, sweeps and maps."""

from .models import (
    Branch,
    DriveSpec,
    ResponseCurve,
    ResponsePoint,
    SolverOptions,
    SweepDirection,
    epsilon_to_power,
    power_to_epsilon,
)
from .solver import LorentzianResponse, steady_state_photons
from .sweeps import (
    FixedPointScan,
    ResponseMap,
    SeparationWindow,
    SweepError,
    avalanche_power,
    bistable_window,
    fixed_point_multiplicity,
    frequency_power_map,
    power_sweep,
    ratio_window,
    separation_window,
)

__all__ = [
    "Branch",
    "DriveSpec",
    "FixedPointScan",
    "LorentzianResponse",
    "ResponseCurve",
    "ResponseMap",
    "ResponsePoint",
    "SeparationWindow",
    "SolverOptions",
    "SweepDirection",
    "SweepError",
    "avalanche_power",
    "bistable_window",
    "epsilon_to_power",
    "fixed_point_multiplicity",
    "frequency_power_map",
    "power_sweep",
    "power_to_epsilon",
    "ratio_window",
    "separation_window",
    "steady_state_photons",
]
