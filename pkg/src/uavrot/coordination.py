"""Centralized and decentralized execution of the rotation optimizer.

In decentralized mode the UAVs form a fixed ring (cell order). A token
carrying the shared location dataset and the current rotation vector is
handed along the ring; each holder re-optimises its own yaw, and the last
UAV in the sequence decides whether another sweep is needed. Links are
reliable and in-order, so a plain FIFO queue stands in for the X2 network.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Literal

from .network import Scenario, sum_rate
from .optimizer import GridObjective, OptimizerConfig, OptResult, aur, coordinate_update

Mode = Literal["centralized", "decentralized"]


@dataclass(frozen=True)
class Forward:
    src: int
    dst: int
    iteration: int
    wrap_around: bool = False


@dataclass
class CoordinationLog:
    mode: Mode
    messages_per_iteration: list[int] = field(default_factory=list)
    forwards: list[Forward] = field(default_factory=list)
    termination: str = ""
    trigger: str = "initial"

    @property
    def total_messages(self) -> int:
        return sum(self.messages_per_iteration)

    def records(self) -> list[dict]:
        return [
            {"src": f.src, "dst": f.dst, "iteration": f.iteration, "wrap_around": f.wrap_around}
            for f in self.forwards
        ]


def expected_forwards(n_uavs: int, iterations: int) -> int:
    return iterations * (n_uavs - 1) + iterations


@dataclass
class _Dataset:
    """What travels in the token: positions plus the optimisation state."""

    scenario: Scenario
    indices: list[int]
    trace: list[float]
    iteration: int


class _UavNode:
    def __init__(self, uid: int, n_uavs: int, cfg: OptimizerConfig):
        self.uid = uid
        self.n_uavs = n_uavs
        self.cfg = cfg
        self._objective: GridObjective | None = None
        self._seen: Scenario | None = None

    def objective(self, scenario: Scenario) -> GridObjective:
        # each node builds its own view from the dataset it received
        if self._objective is None or self._seen is not scenario:
            self._objective = GridObjective(scenario, self.cfg.W)
            self._seen = scenario
        return self._objective

    def handle(self, data: _Dataset) -> tuple[int | None, str]:
        """Update own yaw; return the next hop (None to stop) and a reason."""
        obj = self.objective(data.scenario)
        data.indices[self.uid] = coordinate_update(obj, data.indices, self.uid)
        if self.uid < self.n_uavs - 1:
            return self.uid + 1, ""
        data.trace.append(obj(data.indices))
        if data.trace[-1] - data.trace[-2] <= self.cfg.epsilon:
            return None, "converged"
        if data.iteration >= self.cfg.L:
            return None, "max_iterations"
        return 0, ""


def run_decentralized(scenario: Scenario, cfg: OptimizerConfig = OptimizerConfig()) -> tuple[OptResult, CoordinationLog]:
    n = scenario.n_cells
    nodes = [_UavNode(u, n, cfg) for u in range(n)]
    log = CoordinationLog(mode="decentralized")

    start = GridObjective(scenario, cfg.W)
    data = _Dataset(scenario=scenario, indices=[0] * n, trace=[start([0] * n)], iteration=1)
    inbox: deque[int] = deque([0])
    sent = 0
    while inbox:
        holder = inbox.popleft()
        nxt, reason = nodes[holder].handle(data)
        is_last = holder == n - 1
        # the last node always hands the dataset back to the head of the
        # sequence, either to open the next sweep or to announce termination
        dst = 0 if is_last else nxt
        log.forwards.append(Forward(holder, dst, data.iteration, wrap_around=is_last))
        sent += 1
        if is_last:
            log.messages_per_iteration.append(sent)
            sent = 0
            if nxt is None:
                log.termination = reason
                break
            data.iteration += 1
        inbox.append(dst)

    iterations = len(data.trace) - 1
    angles = start.angles(data.indices)
    evaluations = 1 + sum(nd._objective.evaluations for nd in nodes if nd._objective is not None)
    result = OptResult(
        rotations=angles,
        trace=data.trace,
        iterations=iterations,
        evaluations=evaluations,
        converged=log.termination == "converged",
        report=sum_rate(scenario, angles),
        indices=tuple(data.indices),
    )
    return result, log


def run_centralized(scenario: Scenario, cfg: OptimizerConfig = OptimizerConfig()) -> tuple[OptResult, CoordinationLog]:
    """Base station gathers all positions, runs AUR, broadcasts the angles.

    Message count is N uploads plus N broadcasts, independent of iterations.
    """
    result = aur(scenario, cfg)
    n = scenario.n_cells
    log = CoordinationLog(mode="centralized", messages_per_iteration=[2 * n])
    log.termination = "converged" if result.converged else "max_iterations"
    return result, log


def trigger_update(old: Scenario, new: Scenario, threshold: float = 100.0) -> bool:
    """True when any UAV or GU moved further than ``threshold`` meters."""
    if old.n_cells != new.n_cells or old.cell_sizes != new.cell_sizes:
        raise ValueError(
            f"topology changed: {old.cell_sizes} -> {new.cell_sizes}; positions cannot be compared"
        )
    for a, b in zip(old.uavs, new.uavs):
        if a.distance(b) > threshold:
            return True
    for cell_a, cell_b in zip(old.gus, new.gus):
        for a, b in zip(cell_a, cell_b):
            if a.distance(b) > threshold:
                return True
    return False


def update_cycles(
    snapshots: list[Scenario], cfg: OptimizerConfig = OptimizerConfig(), threshold: float = 100.0
) -> list[tuple[int, OptResult, CoordinationLog]]:
    """Replay a sequence of position snapshots as the head UAV would see them.

    A new decentralized cycle starts on the first snapshot and whenever a
    snapshot has drifted more than ``threshold`` meters from the one the
    current angles were computed on. Returns ``(snapshot_index, result, log)``
    per cycle.
    """
    if not snapshots:
        return []
    result, log = run_decentralized(snapshots[0], cfg)
    cycles = [(0, result, log)]
    reference = snapshots[0]
    for i, snap in enumerate(snapshots[1:], start=1):
        if trigger_update(reference, snap, threshold):
            result, log = run_decentralized(snap, cfg)
            log.trigger = "position-change"
            cycles.append((i, result, log))
            reference = snap
    return cycles


__all__ = [
    "CoordinationLog",
    "Forward",
    "expected_forwards",
    "run_centralized",
    "run_decentralized",
    "trigger_update",
    "update_cycles",
]
