"""Multi-cell downlink model: interference, SINR and sum rate per rotation vector."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .beamforming import rotated_gain, rotated_gain_arrays
from .channel import ArrayConfig, RadioConfig, path_loss
from .geometry import Position3D, link_arrays, link_geometry


@dataclass(frozen=True)
class Scenario:
    """UAV positions, the GUs each one serves, array size and radio constants.

    Cell ``c`` is served by ``uavs[c]`` and contains ``gus[c]``.
    """

    uavs: tuple[Position3D, ...]
    gus: tuple[tuple[Position3D, ...], ...]
    M: int = 8
    radio: RadioConfig = field(default_factory=RadioConfig)

    def __post_init__(self) -> None:
        object.__setattr__(self, "uavs", tuple(self.uavs))
        object.__setattr__(self, "gus", tuple(tuple(cell) for cell in self.gus))
        if len(self.uavs) < 1:
            raise ValueError("scenario needs at least one UAV")
        if len(self.gus) != len(self.uavs):
            raise ValueError(f"{len(self.uavs)} UAVs but {len(self.gus)} GU cells")
        for c, uav in enumerate(self.uavs):
            if not uav.z > 0.0:
                raise ValueError(f"UAV {c} must fly above ground, got z={uav.z}")
        for c, cell in enumerate(self.gus):
            if len(cell) < 1:
                raise ValueError(f"cell {c} has no ground users")
            for k, gu in enumerate(cell):
                if gu.z != 0.0:
                    raise ValueError(f"GU ({c},{k}) must be at z=0, got z={gu.z}")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")

    @property
    def n_cells(self) -> int:
        return len(self.uavs)

    @property
    def cell_sizes(self) -> tuple[int, ...]:
        return tuple(len(cell) for cell in self.gus)

    @property
    def n_gus(self) -> int:
        return sum(self.cell_sizes)

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(M=self.M, wavelength=self.radio.wavelength)

    def with_gus(self, gus) -> "Scenario":
        return Scenario(self.uavs, gus, self.M, self.radio)

    def with_radio(self, radio: RadioConfig) -> "Scenario":
        return Scenario(self.uavs, self.gus, self.M, radio)

    @cached_property
    def tables(self) -> "LinkTables":
        return LinkTables(self)


class LinkTables:
    """Per-(UAV, GU) distances, angles and path losses for a scenario.

    GUs are flattened in cell order; ``cell_of[g]`` gives the serving cell.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        gx = np.array([gu.x for cell in scenario.gus for gu in cell], dtype=float)
        gy = np.array([gu.y for cell in scenario.gus for gu in cell], dtype=float)
        self.cell_of = np.repeat(np.arange(scenario.n_cells), scenario.cell_sizes)
        self.offsets = np.concatenate([[0], np.cumsum(scenario.cell_sizes)])
        n, g = scenario.n_cells, gx.size
        self.distance = np.empty((n, g))
        self.azimuth = np.empty((n, g))
        self.pitch = np.empty((n, g))
        for u, uav in enumerate(scenario.uavs):
            self.distance[u], self.azimuth[u], self.pitch[u] = link_arrays(uav, gx, gy)
        self.loss = path_loss(self.distance, scenario.radio.wavelength)
        if self.loss.ndim == 1:
            self.loss = self.loss.reshape(n, g)
        power = scenario.radio.power
        self.signal = power / self.loss[self.cell_of, np.arange(g)]
        self.noise = scenario.radio.noise_power

    def members(self, cell: int) -> slice:
        return slice(int(self.offsets[cell]), int(self.offsets[cell + 1]))

    def uav_interference(self, u: int, omegas) -> np.ndarray:
        """Average interference (W) that UAV ``u`` puts on every GU.

        Returns shape ``(len(omegas), n_gus)``; entries for UAV ``u``'s own
        cell are zero. Each of the cell's users is scheduled with equal
        probability, hence the 1/K_u weighting.
        """
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        own = self.members(u)
        k_u = own.stop - own.start
        victims = self.cell_of != u
        out = np.zeros((omegas.size, self.cell_of.size))
        if not victims.any():
            return out
        t_az = self.azimuth[u, own][None, :, None]
        t_pitch = self.pitch[u, own][None, :, None]
        v_az = self.azimuth[u, victims][None, None, :]
        v_pitch = self.pitch[u, victims][None, None, :]
        g = rotated_gain_arrays(t_az, t_pitch, v_az, v_pitch, self.scenario.M, omegas[:, None, None])
        weight = self.scenario.radio.power / (k_u * self.loss[u, victims])
        out[:, victims] = g.sum(axis=1) * weight[None, :]
        return out

    def interference_table(self, omegas) -> np.ndarray:
        """``T[u, w, g]``: interference from UAV ``u`` at angle ``omegas[w]`` on GU ``g``."""
        return np.stack([self.uav_interference(u, omegas) for u in range(self.scenario.n_cells)])

    def total_interference(self, rotations: Sequence[float]) -> np.ndarray:
        total = np.zeros(self.cell_of.size)
        for u, w in enumerate(rotations):
            total += self.uav_interference(u, [w])[0]
        return total

    def sinr_from_interference(self, interference: np.ndarray) -> np.ndarray:
        return self.signal / (interference + self.noise)


@dataclass
class RateReport:
    sinr: np.ndarray
    rates: np.ndarray
    cell_rates: np.ndarray
    sum_rate: float
    average_rate: float
    rotations: tuple[float, ...]
    cell_sizes: tuple[int, ...]

    def cell_sinr(self, c: int) -> np.ndarray:
        start = sum(self.cell_sizes[:c])
        return self.sinr[start:start + self.cell_sizes[c]]


def _check_rotations(scenario: Scenario, rotations) -> tuple[float, ...]:
    rot = tuple(float(w) for w in rotations)
    if len(rot) != scenario.n_cells:
        raise ValueError(f"expected {scenario.n_cells} rotation angles, got {len(rot)}")
    return rot


def _check_victim(scenario: Scenario, victim: tuple[int, int]) -> None:
    c, k = victim
    if not 0 <= c < scenario.n_cells:
        raise IndexError(f"cell index {c} out of range")
    if not 0 <= k < len(scenario.gus[c]):
        raise IndexError(f"GU index {k} out of range for cell {c}")


def interference_power(scenario: Scenario, victim: tuple[int, int], rotations) -> float:
    """Average inter-cell interference power (W) at one GU, summed link by link."""
    _check_victim(scenario, victim)
    rot = _check_rotations(scenario, rotations)
    c, k = victim
    gu = scenario.gus[c][k]
    P = scenario.radio.power
    lam = scenario.radio.wavelength
    total = 0.0
    for u, uav in enumerate(scenario.uavs):
        if u == c:
            continue
        to_victim = link_geometry(uav, gu)
        loss = path_loss(to_victim.distance, lam)
        k_u = len(scenario.gus[u])
        for served in scenario.gus[u]:
            g = rotated_gain(link_geometry(uav, served), to_victim, scenario.M, rot[u])
            total += P / (k_u * loss) * g
    return total


def sinr(scenario: Scenario, victim: tuple[int, int], rotations) -> float:
    _check_victim(scenario, victim)
    c, k = victim
    loss = path_loss(link_geometry(scenario.uavs[c], scenario.gus[c][k]).distance, scenario.radio.wavelength)
    signal = scenario.radio.power / loss
    return signal / (interference_power(scenario, victim, rotations) + scenario.radio.noise_power)


def report_from_interference(
    scenario: Scenario, interference: np.ndarray, rotations: tuple[float, ...]
) -> RateReport:
    t = scenario.tables
    s = t.sinr_from_interference(interference)
    rates = np.log2(1.0 + s)
    cell_rates = np.array([rates[t.members(c)].sum() for c in range(scenario.n_cells)])
    total = float(rates.sum())
    return RateReport(
        sinr=s,
        rates=rates,
        cell_rates=cell_rates,
        sum_rate=total,
        average_rate=total / scenario.n_gus,
        rotations=rotations,
        cell_sizes=scenario.cell_sizes,
    )


def sum_rate(scenario: Scenario, rotations) -> RateReport:
    rot = _check_rotations(scenario, rotations)
    return report_from_interference(scenario, scenario.tables.total_interference(rot), rot)


def rate_from_interference(tables: LinkTables, interference: np.ndarray) -> np.ndarray:
    """Sum rate (bits/s/Hz) along the last axis of a stack of interference vectors."""
    return np.log2(1.0 + tables.signal / (interference + tables.noise)).sum(axis=-1)


def snr_db(scenario: Scenario) -> np.ndarray:
    """Interference-free SNR per GU in dB; useful for picking sweep ranges."""
    t = scenario.tables
    return 10.0 * np.log10(t.signal / t.noise)


def noise_limited_rate(scenario: Scenario) -> float:
    t = scenario.tables
    return float(np.log2(1.0 + t.signal / t.noise).sum())


__all__ = [
    "Scenario",
    "LinkTables",
    "RateReport",
    "interference_power",
    "sinr",
    "sum_rate",
    "rate_from_interference",
    "report_from_interference",
    "snr_db",
    "noise_limited_rate",
]
