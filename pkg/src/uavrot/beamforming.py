"""MRT beam gains toward unintended ground points, with and without array yaw."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ArrayConfig, channel, path_loss
from .geometry import QUARTER_TURN, LinkGeometry, Position3D, link_arrays, rotate

# below this |sin(dOmega/2)| the array factor is replaced by its limit
SINGULAR_TOL = 1e-9


def mrt_weights(serving_channel: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(serving_channel))


def array_factor(delta, M: int):
    """Normalised 1D array power factor sin^2(M d/2) / (M^2 sin^2(d/2)).

    ``delta`` is a phase difference pi*(cos_a - cos_b); works elementwise on
    arrays. Removable singularities at multiples of 2*pi evaluate to 1.
    """
    delta = np.asarray(delta, dtype=float)
    half = 0.5 * delta
    den = np.sin(half)
    singular = np.abs(den) < SINGULAR_TOL
    safe_den = np.where(singular, 1.0, den)
    ratio = np.sin(M * half) / (M * safe_den)
    out = np.where(singular, 1.0, np.minimum(ratio * ratio, 1.0))
    return float(out) if out.ndim == 0 else out


def _check_same_origin(a: LinkGeometry, b: LinkGeometry) -> None:
    if a.origin is not None and b.origin is not None and a.origin != b.origin:
        raise ValueError(f"geometries come from different UAVs: {a.origin} vs {b.origin}")


def gain_factors(target: LinkGeometry, victim: LinkGeometry, M: int) -> tuple[float, float]:
    """Horizontal and vertical gain factors; their product is the beam gain."""
    _check_same_origin(target, victim)
    th, tv = target.direction_cosines()
    vh, vv = victim.direction_cosines()
    return array_factor(math.pi * (th - vh), M), array_factor(math.pi * (tv - vv), M)


def gain_closed_form(target: LinkGeometry, victim: LinkGeometry, M: int) -> float:
    gh, gv = gain_factors(target, victim, M)
    return gh * gv


def gain_bruteforce(target: LinkGeometry, victim: LinkGeometry, M: int) -> float:
    """|h_victim h_target^H|^2 from explicitly built channel vectors."""
    _check_same_origin(target, victim)
    # wavelength only sets the common phase, which cancels
    array = ArrayConfig(M=M)
    h_t = channel(target, array)
    h_v = channel(victim, array)
    return float(abs(np.dot(h_v, mrt_weights(h_t))) ** 2)


def rotated_gain(target: LinkGeometry, victim: LinkGeometry, M: int, omega: float) -> float:
    return gain_closed_form(rotate(target, omega), rotate(victim, omega), M)


def gain_vs_rotation_curve(
    target: LinkGeometry, victim: LinkGeometry, M: int, samples: int
) -> list[tuple[float, float]]:
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    omegas = np.arange(samples) * (QUARTER_TURN / samples)
    return [(float(w), rotated_gain(target, victim, M, float(w))) for w in omegas]


def rotated_gain_arrays(target_az, target_pitch, victim_az, victim_pitch, M: int, omega):
    """Broadcasting form of ``rotated_gain`` over raw azimuth/pitch arrays."""
    ta = np.asarray(target_az) + omega
    va = np.asarray(victim_az) + omega
    ts = np.sin(target_pitch)
    vs = np.sin(victim_pitch)
    gh = array_factor(np.pi * (np.cos(ta) * ts - np.cos(va) * vs), M)
    gv = array_factor(np.pi * (np.sin(ta) * ts - np.sin(va) * vs), M)
    return gh * gv


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned ground rectangle sampled every ``resolution`` meters."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: float = 10.0

    def __post_init__(self) -> None:
        if not self.resolution > 0.0:
            raise ValueError(f"grid resolution must be positive, got {self.resolution}")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise ValueError("grid has an empty extent")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        nx = int(math.floor((self.x_max - self.x_min) / self.resolution + 1e-9)) + 1
        ny = int(math.floor((self.y_max - self.y_min) / self.resolution + 1e-9)) + 1
        return (
            self.x_min + self.resolution * np.arange(nx),
            self.y_min + self.resolution * np.arange(ny),
        )

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        xs, ys = self.axes()
        return np.meshgrid(xs, ys, indexing="xy")


@dataclass
class GroundPattern:
    """Beam gain sampled over a ground grid; arrays are indexed [iy, ix]."""

    x: np.ndarray
    y: np.ndarray
    gain: np.ndarray
    received_power: np.ndarray | None = None


def ground_pattern(
    uav: Position3D,
    target_gu: Position3D,
    M: int,
    omega: float,
    grid: GridSpec,
    power: float | None = None,
    wavelength: float | None = None,
) -> GroundPattern:
    """Gain of the beam aimed at ``target_gu`` at every grid point.

    When ``power`` (W) and ``wavelength`` (m) are given the received power
    P * g / L(d) is filled in as well.
    """
    X, Y = grid.mesh()
    if X.size == 0:
        raise ValueError("empty grid")
    _, t_az, t_pitch = link_arrays(uav, np.array(target_gu.x), np.array(target_gu.y))
    d, az, pitch = link_arrays(uav, X, Y)
    g = rotated_gain_arrays(t_az, t_pitch, az, pitch, M, omega)
    received = None
    if power is not None:
        if wavelength is None:
            raise ValueError("wavelength required to compute received power")
        received = power * g / path_loss(d, wavelength)
    return GroundPattern(x=X, y=Y, gain=g, received_power=received)
