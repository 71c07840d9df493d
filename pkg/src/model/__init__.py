"""Model module - system parameterization and bare operators."""

from .operators import (
    DEFAULT_EJ_OVER_EC,
    block_dim,
    default_charge_dispersions,
    ej_over_ec_from_ladder,
    exponential_charge_dispersions,
    lowering_elements,
    sigma_minus_elements,
    sigma_z_elements,
)
from .specs import (
    Detunings,
    MlsSpec,
    ModelError,
    ResonanceError,
    SystemSpec,
    TwoPhotonResonanceError,
    build_transmon_spec,
    detunings,
)

__all__ = [
    "DEFAULT_EJ_OVER_EC",
    "Detunings",
    "MlsSpec",
    "ModelError",
    "ResonanceError",
    "SystemSpec",
    "TwoPhotonResonanceError",
    "block_dim",
    "build_transmon_spec",
    "default_charge_dispersions",
    "detunings",
    "ej_over_ec_from_ladder",
    "exponential_charge_dispersions",
    "lowering_elements",
    "sigma_minus_elements",
    "sigma_z_elements",
]
