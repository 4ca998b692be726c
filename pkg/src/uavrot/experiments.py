"""Scenario generation, location errors, Monte Carlo trials, sweeps and heatmaps.

Random streams
--------------
Everything derives from one root seed. The stream for a given purpose is
``SeedSequence(seed, spawn_key=(trial, purpose, *extra))``:

* purpose 0 places GUs, with ``extra = (cell,)`` so each cell has its own stream;
* purpose 1 draws location errors as unit normals, scaled by sigma afterwards.

Streams therefore do not depend on which strategies run, on the transmit
power, or on sigma, which gives common random numbers across every sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .beamforming import GridSpec, rotated_gain_arrays
from .channel import RadioConfig, path_loss
from .geometry import Position3D, link_arrays
from .network import Scenario, sum_rate
from .optimizer import DEFAULT_BUDGET, OptimizerConfig, aur, exhaustive_search, fixed_baseline

PLACEMENT = 0
LOCATION_ERROR = 1

STRATEGIES = ("fixed", "aur", "exhaustive")

DEFAULT_UAVS = (
    Position3D(500.0, 500.0, 200.0),
    Position3D(500.0, 1500.0, 200.0),
    Position3D(1000.0, 1500.0, 200.0),
)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


@dataclass(frozen=True)
class PlacementSpec:
    radius: float = 500.0
    min_distance: float = 200.0
    K: int = 10
    seed: int = 2025

    def __post_init__(self) -> None:
        if not (0.0 <= self.min_distance < self.radius):
            raise ValueError(f"need 0 <= min_distance < radius, got {self.min_distance}, {self.radius}")
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0

    def __post_init__(self) -> None:
        if not self.sigma >= 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class Deployment:
    """Everything about a scenario except where the GUs are."""

    uavs: tuple[Position3D, ...] = DEFAULT_UAVS
    M: int = 8
    radio: RadioConfig = field(default_factory=RadioConfig)

    def populate(self, gus) -> Scenario:
        return Scenario(self.uavs, gus, self.M, self.radio)


def sample_gus(center: tuple[float, float], spec: PlacementSpec, rng: np.random.Generator) -> list[Position3D]:
    """K points uniform by area on the annulus [min_distance, radius] around ``center``."""
    r_min2 = spec.min_distance**2
    r_max2 = spec.radius**2
    u = rng.random(spec.K)
    theta = rng.random(spec.K) * (2.0 * math.pi)
    r = np.sqrt(r_min2 + u * (r_max2 - r_min2))
    cx, cy = center
    return [Position3D(float(cx + ri * math.cos(t)), float(cy + ri * math.sin(t)), 0.0) for ri, t in zip(r, theta)]


def place_gus(deployment: Deployment, spec: PlacementSpec, trial: int) -> Scenario:
    cells = [
        sample_gus((uav.x, uav.y), spec, stream(spec.seed, trial, PLACEMENT, c))
        for c, uav in enumerate(deployment.uavs)
    ]
    return deployment.populate(cells)


def perturb_positions(scenario: Scenario, noise: NoiseSpec, rng: np.random.Generator) -> Scenario:
    """Copy of ``scenario`` with N(0, sigma^2) errors on every GU's x and y.

    The unit normals are always drawn, so a given stream yields the same
    error pattern, merely rescaled, for every sigma.
    """
    z = rng.standard_normal((scenario.n_gus, 2))
    if noise.sigma == 0.0:
        return scenario
    offsets = noise.sigma * z
    cells = []
    i = 0
    for cell in scenario.gus:
        moved = []
        for gu in cell:
            moved.append(Position3D(gu.x + float(offsets[i, 0]), gu.y + float(offsets[i, 1]), 0.0))
            i += 1
        cells.append(moved)
    return scenario.with_gus(cells)


@dataclass
class TrialRecord:
    trial: int
    strategy: str
    average_rate: float
    sum_rate: float
    rotations: tuple[float, ...]
    iterations: int
    converged: bool


@dataclass
class TrialSummary:
    strategies: tuple[str, ...]
    records: list[TrialRecord]
    trials: int
    sigma: float = 0.0
    power_dbm: float | None = None

    def rates(self, strategy: str) -> np.ndarray:
        return np.array([r.average_rate for r in self.records if r.strategy == strategy])

    def iterations(self, strategy: str) -> np.ndarray:
        return np.array([r.iterations for r in self.records if r.strategy == strategy])

    def mean(self, strategy: str) -> float:
        return float(np.mean(self.rates(strategy)))

    def std(self, strategy: str) -> float:
        x = self.rates(strategy)
        return float(np.std(x, ddof=1)) if x.size > 1 else 0.0

    def gain(self, strategy: str = "aur", baseline: str = "fixed") -> float:
        """Relative improvement of mean average-GU rate over the baseline."""
        return self.mean(strategy) / self.mean(baseline) - 1.0

    def gain_per_trial(self, strategy: str = "aur", baseline: str = "fixed") -> np.ndarray:
        return self.rates(strategy) / self.rates(baseline) - 1.0

    def gain_stderr(self, strategy: str = "aur", baseline: str = "fixed") -> float:
        g = self.gain_per_trial(strategy, baseline)
        return float(np.std(g, ddof=1) / math.sqrt(g.size)) if g.size > 1 else 0.0

    def to_dict(self) -> dict:
        out: dict = {"trials": self.trials, "sigma_m": self.sigma, "strategies": {}}
        if self.power_dbm is not None:
            out["power_dbm"] = self.power_dbm
        for s in self.strategies:
            entry = {
                "mean_average_rate": self.mean(s),
                "std_average_rate": self.std(s),
                "mean_iterations": float(np.mean(self.iterations(s))),
                "max_iterations": int(np.max(self.iterations(s))),
            }
            if s != "fixed" and "fixed" in self.strategies:
                entry["gain_vs_fixed"] = self.gain(s)
                entry["gain_vs_fixed_stderr"] = self.gain_stderr(s)
            out["strategies"][s] = entry
        return out


def _run_strategy(name: str, view: Scenario, cfg: OptimizerConfig, budget: int):
    if name == "fixed":
        return fixed_baseline(view)
    if name == "aur":
        return aur(view, cfg)
    if name == "exhaustive":
        return exhaustive_search(view, cfg.W, budget)
    raise ValueError(f"unknown strategy {name!r}; choose from {STRATEGIES}")


def run_trial(
    deployment: Deployment,
    spec: PlacementSpec,
    cfg: OptimizerConfig,
    strategies: Sequence[str],
    trial: int,
    noise: NoiseSpec = NoiseSpec(),
    budget: int = DEFAULT_BUDGET,
) -> list[TrialRecord]:
    truth = place_gus(deployment, spec, trial)
    view = perturb_positions(truth, noise, stream(spec.seed, trial, LOCATION_ERROR))
    out = []
    for name in strategies:
        res = _run_strategy(name, view, cfg, budget)
        # angles come from the (possibly noisy) view, the score from the truth
        report = sum_rate(truth, res.rotations)
        out.append(
            TrialRecord(
                trial=trial,
                strategy=name,
                average_rate=report.average_rate,
                sum_rate=report.sum_rate,
                rotations=res.rotations,
                iterations=res.iterations,
                converged=res.converged,
            )
        )
    return out


def monte_carlo(
    deployment: Deployment,
    spec: PlacementSpec,
    cfg: OptimizerConfig,
    strategies: Sequence[str] = ("fixed", "aur"),
    trials: int = 50,
    noise: NoiseSpec | None = None,
    budget: int = DEFAULT_BUDGET,
) -> TrialSummary:
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    for name in strategies:
        if name not in STRATEGIES:
            raise ValueError(f"unknown strategy {name!r}; choose from {STRATEGIES}")
    noise = noise or NoiseSpec()
    records: list[TrialRecord] = []
    for t in range(trials):
        records.extend(run_trial(deployment, spec, cfg, strategies, t, noise, budget))
    return TrialSummary(
        strategies=tuple(strategies),
        records=records,
        trials=trials,
        sigma=noise.sigma,
        power_dbm=deployment.radio.power_dbm,
    )


def power_sweep(
    deployment: Deployment,
    spec: PlacementSpec,
    cfg: OptimizerConfig,
    powers_dbm: Iterable[float],
    strategies: Sequence[str] = ("fixed", "aur"),
    trials: int = 50,
    noise: NoiseSpec | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict[float, TrialSummary]:
    out = {}
    for p in powers_dbm:
        radio = RadioConfig(
            power_dbm=float(p),
            bandwidth_hz=deployment.radio.bandwidth_hz,
            noise_psd_dbm_hz=deployment.radio.noise_psd_dbm_hz,
            carrier_hz=deployment.radio.carrier_hz,
        )
        dep = Deployment(deployment.uavs, deployment.M, radio)
        out[float(p)] = monte_carlo(dep, spec, cfg, strategies, trials, noise, budget)
    return out


def robustness_sweep(
    deployment: Deployment,
    spec: PlacementSpec,
    cfg: OptimizerConfig,
    sigmas: Iterable[float],
    strategies: Sequence[str] = ("fixed", "aur"),
    trials: int = 50,
    budget: int = DEFAULT_BUDGET,
) -> dict[float, TrialSummary]:
    return {
        float(s): monte_carlo(deployment, spec, cfg, strategies, trials, NoiseSpec(float(s)), budget)
        for s in sigmas
    }


@dataclass
class Heatmap:
    """Average inter-cell interference on a ground grid, arrays indexed [iy, ix]."""

    x: np.ndarray
    y: np.ndarray
    cell: np.ndarray
    interference: np.ndarray
    rotations: tuple[float, ...]

    @property
    def interference_dbm(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.interference) + 30.0

    def mean(self) -> float:
        return float(np.mean(self.interference))


def default_grid(scenario: Scenario, radius: float = 500.0, resolution: float = 10.0) -> GridSpec:
    xs = [u.x for u in scenario.uavs]
    ys = [u.y for u in scenario.uavs]
    return GridSpec(min(xs) - radius, max(xs) + radius, min(ys) - radius, max(ys) + radius, resolution)


def interference_heatmap(scenario: Scenario, rotations, grid: GridSpec | None = None) -> Heatmap:
    """Interference a probe GU would see at each grid point.

    Each point belongs to the cell of the horizontally nearest UAV and
    collects interference from all other UAVs, each averaged over its
    scheduled users exactly as for a real GU.
    """
    rot = tuple(float(w) for w in rotations)
    if len(rot) != scenario.n_cells:
        raise ValueError(f"expected {scenario.n_cells} rotation angles, got {len(rot)}")
    grid = grid or default_grid(scenario)
    X, Y = grid.mesh()
    uxy = np.array([[u.x, u.y] for u in scenario.uavs])
    d2 = (X[..., None] - uxy[:, 0]) ** 2 + (Y[..., None] - uxy[:, 1]) ** 2
    cell = np.argmin(d2, axis=-1)
    total = np.zeros(X.shape)
    P = scenario.radio.power
    lam = scenario.radio.wavelength
    for u, uav in enumerate(scenario.uavs):
        if scenario.n_cells == 1:
            break
        served = scenario.gus[u]
        _, t_az, t_pitch = link_arrays(
            uav, np.array([g.x for g in served]), np.array([g.y for g in served])
        )
        d, az, pitch = link_arrays(uav, X, Y)
        g = np.zeros(X.shape)
        for k in range(len(served)):
            g += rotated_gain_arrays(t_az[k], t_pitch[k], az, pitch, scenario.M, rot[u])
        contrib = P * g / (len(served) * path_loss(d, lam))
        total += np.where(cell == u, 0.0, contrib)
    return Heatmap(x=X, y=Y, cell=cell, interference=total, rotations=rot)
