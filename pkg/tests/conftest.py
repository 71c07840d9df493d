"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import pytest

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.model import MlsSpec, SystemSpec, build_transmon_spec  # noqa: E402
from src.response import SolverOptions  # noqa: E402


@pytest.fixture
def transmon6() -> SystemSpec:
    """Six-level transmon ladder at ω_r = 7000 MHz, κ = 1 MHz."""
    return SystemSpec(mls=build_transmon_spec(6000, 5750, 100, 6), omega_r=7000)


@pytest.fixture
def transmon2() -> SystemSpec:
    """Two-level truncation of the same transmon."""
    return SystemSpec(mls=build_transmon_spec(6000, 5750, 100, 2), omega_r=7000)


@pytest.fixture
def linear_cavity() -> SystemSpec:
    """Uncoupled ladder: the resonator is linear for every level."""
    return SystemSpec(
        mls=MlsSpec(level_freqs=(0.0, 6000.0, 11750.0), couplings=(0.0, 0.0)),
        omega_r=7000,
    )


@pytest.fixture
def solver() -> SolverOptions:
    """Solver options independent of the process environment."""
    return SolverOptions(damping=0.5, max_iterations=100_000, tolerance=1e-10, max_halvings=4)
