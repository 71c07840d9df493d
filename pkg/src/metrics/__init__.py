"""Metrics module - readout SNR and QND-degradation rates."""

from .noise import NoiseSpectrum, OneOverFNoise, SpectrumError, WhiteNoise
from .rates import (
    NormalizationError,
    RatePair,
    RateRow,
    RateTable,
    dressed_decay_rates,
    dressed_dephasing_rates,
    dressed_detunings,
    lowering_amplitudes,
    photon_number,
    purcell_rates,
    rates_vs_power,
)
from .snr import (
    SnrConfig,
    SnrPoint,
    cavity_pull,
    gamma_1_from_t1,
    pointer_separation,
    snr_curve,
)

__all__ = [
    "NoiseSpectrum",
    "NormalizationError",
    "OneOverFNoise",
    "RatePair",
    "RateRow",
    "RateTable",
    "SnrConfig",
    "SnrPoint",
    "SpectrumError",
    "WhiteNoise",
    "cavity_pull",
    "dressed_decay_rates",
    "dressed_dephasing_rates",
    "dressed_detunings",
    "gamma_1_from_t1",
    "lowering_amplitudes",
    "photon_number",
    "pointer_separation",
    "purcell_rates",
    "rates_vs_power",
    "snr_curve",
]
