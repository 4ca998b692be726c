"""Line-of-sight channel model for an M x M half-wavelength planar array."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import LinkGeometry

SPEED_OF_LIGHT = 299_792_458.0


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts):
    return 10.0 * np.log10(watts) + 30.0


@dataclass(frozen=True)
class ArrayConfig:
    M: int = 8
    wavelength: float = SPEED_OF_LIGHT / 28e9

    def __post_init__(self) -> None:
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"array size M must be a positive integer, got {self.M}")
        if not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def n_elements(self) -> int:
        return self.M * self.M


@dataclass(frozen=True)
class RadioConfig:
    power_dbm: float = 50.0
    bandwidth_hz: float = 1e9
    noise_psd_dbm_hz: float = -174.0
    carrier_hz: float = 28e9

    def __post_init__(self) -> None:
        if not self.bandwidth_hz > 0.0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")
        if not self.carrier_hz > 0.0:
            raise ValueError(f"carrier frequency must be positive, got {self.carrier_hz}")

    @property
    def power(self) -> float:
        """Transmit power in watts."""
        return dbm_to_watts(self.power_dbm)

    @property
    def noise_power(self) -> float:
        """Thermal noise power over the full bandwidth, in watts."""
        return dbm_to_watts(self.noise_psd_dbm_hz + 10.0 * math.log10(self.bandwidth_hz))

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz


def steering_1d(M: int, direction_cosine: float) -> np.ndarray:
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if abs(direction_cosine) > 1.0 + 1e-12:
        raise ValueError(f"direction cosine {direction_cosine} outside [-1, 1]")
    k = np.arange(M)
    return np.exp(1j * np.pi * direction_cosine * k) / math.sqrt(M)


def channel(geom: LinkGeometry, array: ArrayConfig) -> np.ndarray:
    """Unit-norm channel row vector of length M**2, horizontal factor first."""
    cos_h, cos_v = geom.direction_cosines()
    phase = np.exp(-2j * np.pi * geom.distance / array.wavelength)
    return phase * np.kron(steering_1d(array.M, cos_h), steering_1d(array.M, cos_v))


def path_loss(d, wavelength: float):
    """Free-space loss (4 pi d / lambda)**2; accepts scalars or arrays."""
    if not wavelength > 0.0:
        raise ValueError(f"wavelength must be positive, got {wavelength}")
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr <= 0.0):
        raise ValueError("distance must be positive")
    loss = (4.0 * np.pi * d_arr / wavelength) ** 2
    return float(loss) if loss.ndim == 0 else loss
