"""Rotation search: alternating per-UAV updates, exhaustive enumeration, fixed baseline."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .network import LinkTables, RateReport, Scenario, rate_from_interference, sum_rate

DEFAULT_BUDGET = 10**6
_CHUNK = 1 << 15


class BudgetExceeded(RuntimeError):
    def __init__(self, evaluations: int, budget: int):
        super().__init__(f"exhaustive search needs {evaluations} evaluations (W**N), budget is {budget}")
        self.evaluations = evaluations
        self.budget = budget


@dataclass(frozen=True)
class OptimizerConfig:
    W: int = 32
    L: int = 20
    epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if self.W < 1:
            raise ValueError(f"W must be >= 1, got {self.W}")
        if self.L < 1:
            raise ValueError(f"L must be >= 1, got {self.L}")
        if not self.epsilon >= 0.0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")


@dataclass
class OptResult:
    rotations: tuple[float, ...]
    trace: list[float]
    iterations: int
    evaluations: int
    converged: bool
    report: RateReport | None = None
    indices: tuple[int, ...] = field(default=())

    @property
    def sum_rate(self) -> float:
        return self.trace[-1]


def angle_grid(W: int) -> np.ndarray:
    """W equally spaced yaw angles over [0, pi/2); pi/2 itself repeats 0."""
    if W < 1:
        raise ValueError(f"W must be >= 1, got {W}")
    return np.arange(W) * (0.5 * math.pi / W)


class GridObjective:
    """Sum rate over grid-index vectors, backed by a precomputed interference table.

    Interference from UAV ``u`` depends only on its own angle, so the table
    ``T[u, w, g]`` turns every evaluation into N lookups and a log-sum.
    """

    def __init__(self, scenario: Scenario, W: int):
        self.scenario = scenario
        self.grid = angle_grid(W)
        self.tables: LinkTables = scenario.tables
        self.table = self.tables.interference_table(self.grid)
        self.evaluations = 0

    def interference(self, idx) -> np.ndarray:
        total = np.zeros(self.table.shape[2])
        for u, w in enumerate(idx):
            total = total + self.table[u, w]
        return total

    def __call__(self, idx) -> float:
        self.evaluations += 1
        return float(rate_from_interference(self.tables, self.interference(idx)))

    def candidates(self, idx, u: int) -> np.ndarray:
        """Sum rate for every grid angle of UAV ``u``, others held at ``idx``."""
        # same summation order as __call__, so the incumbent's value is bit-identical
        stack = np.zeros(self.table.shape[1:])
        for v, w in enumerate(idx):
            stack = stack + (self.table[u] if v == u else self.table[v, w][None, :])
        self.evaluations += stack.shape[0]
        return rate_from_interference(self.tables, stack)

    def angles(self, idx) -> tuple[float, ...]:
        return tuple(float(self.grid[w]) for w in idx)


def coordinate_update(objective: GridObjective, idx: list[int], u: int) -> int:
    """Best grid index for UAV ``u``; the smallest index wins ties."""
    rates = objective.candidates(idx, u)
    return int(np.argmax(rates))


def aur(scenario: Scenario, cfg: OptimizerConfig = OptimizerConfig(), objective: GridObjective | None = None) -> OptResult:
    """Alternating UAV rotation: cyclic coordinate ascent over the angle grid.

    Starts from all-zero yaw; ``trace[0]`` is that starting rate. Each
    iteration sweeps the UAVs in cell order and stops once the sweep gains no
    more than ``cfg.epsilon`` or after ``cfg.L`` sweeps.
    """
    obj = objective if objective is not None else GridObjective(scenario, cfg.W)
    idx = [0] * scenario.n_cells
    trace = [obj(idx)]
    converged = False
    iterations = 0
    while iterations < cfg.L:
        iterations += 1
        for u in range(scenario.n_cells):
            idx[u] = coordinate_update(obj, idx, u)
        trace.append(obj(idx))
        if trace[-1] - trace[-2] <= cfg.epsilon:
            converged = True
            break
    angles = obj.angles(idx)
    return OptResult(
        rotations=angles,
        trace=trace,
        iterations=iterations,
        evaluations=obj.evaluations,
        converged=converged,
        report=sum_rate(scenario, angles),
        indices=tuple(idx),
    )


def exhaustive_search(
    scenario: Scenario, W: int, budget: int = DEFAULT_BUDGET, objective: GridObjective | None = None
) -> OptResult:
    n = scenario.n_cells
    total = W**n
    if total > budget:
        raise BudgetExceeded(total, budget)
    obj = objective if objective is not None else GridObjective(scenario, W)
    best_rate = -math.inf
    best_idx: tuple[int, ...] = (0,) * n
    # itertools.product yields index vectors in lexicographic order, so the
    # first strict maximum is the lexicographically smallest maximiser
    combos = itertools.product(range(W), repeat=n)
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=int).reshape(-1, n)
        if chunk.size == 0:
            break
        interference = np.zeros((chunk.shape[0], obj.table.shape[2]))
        for u in range(n):
            interference += obj.table[u, chunk[:, u]]
        rates = rate_from_interference(obj.tables, interference)
        obj.evaluations += chunk.shape[0]
        j = int(np.argmax(rates))
        if rates[j] > best_rate:
            best_rate = float(rates[j])
            best_idx = tuple(int(w) for w in chunk[j])
    angles = obj.angles(best_idx)
    return OptResult(
        rotations=angles,
        trace=[best_rate],
        iterations=1,
        evaluations=obj.evaluations,
        converged=True,
        report=sum_rate(scenario, angles),
        indices=best_idx,
    )


def fixed_baseline(scenario: Scenario) -> OptResult:
    zeros = (0.0,) * scenario.n_cells
    report = sum_rate(scenario, zeros)
    return OptResult(
        rotations=zeros,
        trace=[report.sum_rate],
        iterations=0,
        evaluations=1,
        converged=True,
        report=report,
        indices=(0,) * scenario.n_cells,
    )
