"""Low-frequency noise spectra, normalised to their value at 1 Hz."""

from dataclasses import dataclass
from typing import Protocol

# 1 Hz in MHz
ONE_HZ = 1e-6


class SpectrumError(Exception):
    """Raised when a noise spectrum is evaluated where it is undefined."""

    pass


class NoiseSpectrum(Protocol):
    """Spectral density ratio S(f)/S(1 Hz) for a detuning f in MHz."""

    def ratio(self, detuning: float) -> float: ...


@dataclass(frozen=True)
class OneOverFNoise:
    """1/f spectrum: S(f)/S(1 Hz) = (1 Hz)/|f|.

    Example:
        >>> OneOverFNoise().ratio(-1e-6)
        1.0
    """

    def ratio(self, detuning: float) -> float:
        if detuning == 0:
            raise SpectrumError("1/f spectrum is undefined at zero detuning")
        return ONE_HZ / abs(detuning)


@dataclass(frozen=True)
class WhiteNoise:
    """Flat spectrum at a fixed level relative to S(1 Hz)."""

    level: float = 1.0

    def ratio(self, detuning: float) -> float:
        return self.level
