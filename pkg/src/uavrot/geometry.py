"""UAV-to-ground link geometry and the yaw rotation applied to it."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

TWO_PI = 2.0 * math.pi
QUARTER_TURN = 0.5 * math.pi


@dataclass(frozen=True)
class Position3D:
    x: float
    y: float
    z: float = 0.0

    @property
    def is_ground(self) -> bool:
        return self.z == 0.0

    def horizontal_distance(self, other: "Position3D") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def distance(self, other: "Position3D") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2 + (self.z - other.z) ** 2)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class LinkGeometry:
    """Distance, azimuth and pitch of a ground point as seen from one UAV.

    ``azimuth`` is measured counterclockwise from the array's x-axis and kept
    in [0, 2*pi). ``pitch`` is the angle off the downward vertical, so a point
    directly below the UAV has pitch 0.
    """

    distance: float
    azimuth: float
    pitch: float
    origin: Optional[Position3D] = None

    @property
    def cos_alpha(self) -> float:
        return math.cos(self.azimuth)

    @property
    def cos_beta(self) -> float:
        return math.sin(self.azimuth)

    @property
    def alpha(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.cos_alpha)))

    @property
    def beta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.cos_beta)))

    def direction_cosines(self) -> tuple[float, float]:
        """Direction cosines along the horizontal and vertical array axes."""
        s = math.sin(self.pitch)
        return math.cos(self.azimuth) * s, math.sin(self.azimuth) * s


def wrap_angle(angle: float) -> float:
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative value can round up to exactly 2*pi
    if wrapped >= TWO_PI:
        wrapped = 0.0
    return wrapped


def link_geometry(uav: Position3D, gu: Position3D) -> LinkGeometry:
    if not uav.z > 0.0:
        raise ValueError(f"UAV altitude must be positive, got z={uav.z}")
    if gu.z != 0.0:
        raise ValueError(f"ground user must lie at z=0, got z={gu.z}")
    dx = gu.x - uav.x
    dy = gu.y - uav.y
    d = math.sqrt(dx * dx + dy * dy + uav.z * uav.z)
    if dx == 0.0 and dy == 0.0:
        return LinkGeometry(distance=d, azimuth=0.0, pitch=0.0, origin=uav)
    azimuth = wrap_angle(math.atan2(dy, dx))
    pitch = math.atan2(math.hypot(dx, dy), uav.z)
    return LinkGeometry(distance=d, azimuth=azimuth, pitch=pitch, origin=uav)


def rotate(geom: LinkGeometry, omega: float) -> LinkGeometry:
    """Express ``geom`` in the frame of an array yawed by ``omega`` radians.

    Only the azimuth changes; distance and pitch are untouched.
    """
    if not math.isfinite(omega):
        raise ValueError(f"rotation angle must be finite, got {omega}")
    return replace(geom, azimuth=wrap_angle(geom.azimuth + omega))


@dataclass(frozen=True)
class RotationVector:
    """One yaw angle per UAV, each reduced into [0, pi/2)."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        for a in self.angles:
            if not (0.0 <= a < QUARTER_TURN):
                raise ValueError(f"rotation {a} outside [0, pi/2)")

    @classmethod
    def zeros(cls, n: int) -> "RotationVector":
        return cls((0.0,) * n)

    @classmethod
    def reduced(cls, angles) -> "RotationVector":
        """Build from arbitrary angles, folding each into [0, pi/2)."""
        out = []
        for a in angles:
            r = math.fmod(float(a), QUARTER_TURN)
            if r < 0.0:
                r += QUARTER_TURN
            if r >= QUARTER_TURN:
                r = 0.0
            out.append(r)
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.angles)

    def __getitem__(self, i: int) -> float:
        return self.angles[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.angles, dtype=float)


def link_arrays(uav: Position3D, xs: np.ndarray, ys: np.ndarray):
    """Vectorised ``link_geometry`` for many ground points.

    Returns ``(distance, azimuth, pitch)`` arrays broadcast like ``xs``/``ys``.
    """
    if not uav.z > 0.0:
        raise ValueError(f"UAV altitude must be positive, got z={uav.z}")
    dx = np.asarray(xs, dtype=float) - uav.x
    dy = np.asarray(ys, dtype=float) - uav.y
    rho = np.hypot(dx, dy)
    d = np.sqrt(dx * dx + dy * dy + uav.z * uav.z)
    az = np.mod(np.arctan2(dy, dx), TWO_PI)
    az = np.where(az >= TWO_PI, 0.0, az)
    az = np.where(rho == 0.0, 0.0, az)
    pitch = np.arctan2(rho, uav.z)
    return d, az, pitch
