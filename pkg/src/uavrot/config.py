"""Run configuration: JSON file + dotted overrides -> validated RunConfig."""

from __future__ import annotations

import hashlib
import json
import os
import types
import typing
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

from .experiments import STRATEGIES

ENV_CONFIG = "UAVROT_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioBlock:
    uavs: list[list[float]] = field(
        default_factory=lambda: [[500.0, 500.0, 200.0], [500.0, 1500.0, 200.0], [1000.0, 1500.0, 200.0]]
    )
    gus_per_cell: int = 10
    radius: float = 500.0
    min_distance: float = 200.0
    # explicit GU layout per cell as [[x, y], ...]; sampled from the seed when absent
    gus: Optional[list[list[list[float]]]] = None


@dataclass
class RadioBlock:
    power_dbm: float = 50.0
    bandwidth_hz: float = 1e9
    noise_psd_dbm_hz: float = -174.0
    carrier_hz: float = 28e9


@dataclass
class ArrayBlock:
    M: int = 8


@dataclass
class OptimizerBlock:
    W: int = 32
    L: int = 20
    epsilon: float = 1e-6
    budget: int = 1_000_000


@dataclass
class ExperimentBlock:
    trials: int = 50
    seed: int = 2025
    strategies: list[str] = field(default_factory=lambda: ["fixed", "aur"])
    trial: int = 0
    # location error used by `montecarlo`; sweeps use `sigmas`
    sigma: float = 0.0
    powers_dbm: list[float] = field(default_factory=lambda: [20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0])
    sigmas: list[float] = field(default_factory=lambda: [0.0, 20.0, 40.0, 60.0, 80.0, 100.0])
    grid_resolution: float = 10.0


@dataclass
class OutputBlock:
    directory: str = "results"
    formats: list[str] = field(default_factory=lambda: ["json", "csv"])


@dataclass
class RunConfig:
    scenario: ScenarioBlock = field(default_factory=ScenarioBlock)
    radio: RadioBlock = field(default_factory=RadioBlock)
    array: ArrayBlock = field(default_factory=ArrayBlock)
    optimizer: OptimizerBlock = field(default_factory=OptimizerBlock)
    experiment: ExperimentBlock = field(default_factory=ExperimentBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _check_type(value: Any, tp: Any, where: str) -> Any:
    origin = typing.get_origin(tp)
    if origin is typing.Union or origin is types.UnionType:
        args = typing.get_args(tp)
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _check_type(value, inner[0], where)
    if origin is list:
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list, got {type(value).__name__}")
        (item,) = typing.get_args(tp)
        return [_check_type(v, item, f"{where}[{i}]") for i, v in enumerate(value)]
    if tp is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false")
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                return int(value)
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{where}: unsupported type {tp}")


def _build(cls, data: Any, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'}: expected an object")
    hints = typing.get_type_hints(cls)
    known = {f.name for f in fields(cls)}
    for key in data:
        if key not in known:
            path = f"{where}.{key}" if where else key
            raise ConfigError(f"{path}: unknown field")
    kwargs = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        path = f"{where}.{f.name}" if where else f.name
        tp = hints[f.name]
        if isinstance(tp, type) and hasattr(tp, "__dataclass_fields__"):
            kwargs[f.name] = _build(tp, data[f.name], path)
        else:
            kwargs[f.name] = _check_type(data[f.name], tp, path)
    return cls(**kwargs)


def validate(cfg: RunConfig) -> RunConfig:
    s, r, a, o, e = cfg.scenario, cfg.radio, cfg.array, cfg.optimizer, cfg.experiment

    def need(cond: bool, path: str, msg: str) -> None:
        if not cond:
            raise ConfigError(f"{path}: {msg}")

    need(len(s.uavs) >= 1, "scenario.uavs", "at least one UAV is required")
    for i, p in enumerate(s.uavs):
        need(len(p) == 3, f"scenario.uavs[{i}]", "expected [x, y, z]")
        need(p[2] > 0, f"scenario.uavs[{i}]", "altitude must be positive")
    need(s.gus_per_cell >= 1, "scenario.gus_per_cell", "must be >= 1")
    need(s.radius > 0, "scenario.radius", "must be positive")
    need(0 <= s.min_distance < s.radius, "scenario.min_distance", "must satisfy 0 <= min_distance < radius")
    if s.gus is not None:
        need(len(s.gus) == len(s.uavs), "scenario.gus", "one GU list per UAV is required")
        for c, cell in enumerate(s.gus):
            need(len(cell) >= 1, f"scenario.gus[{c}]", "cell has no GUs")
            for k, p in enumerate(cell):
                need(len(p) in (2, 3), f"scenario.gus[{c}][{k}]", "expected [x, y]")
                need(len(p) == 2 or p[2] == 0, f"scenario.gus[{c}][{k}]", "GUs must be at z = 0")
    need(r.bandwidth_hz > 0, "radio.bandwidth_hz", "must be positive")
    need(r.carrier_hz > 0, "radio.carrier_hz", "must be positive")
    need(a.M >= 1, "array.M", "must be >= 1")
    need(o.W >= 1, "optimizer.W", "must be >= 1")
    need(o.L >= 1, "optimizer.L", "must be >= 1")
    need(o.epsilon >= 0, "optimizer.epsilon", "must be >= 0")
    need(o.budget >= 1, "optimizer.budget", "must be >= 1")
    need(e.trials >= 1, "experiment.trials", "must be >= 1")
    need(e.seed >= 0, "experiment.seed", "must be >= 0")
    need(e.trial >= 0, "experiment.trial", "must be >= 0")
    need(len(e.strategies) >= 1, "experiment.strategies", "at least one strategy is required")
    for name in e.strategies:
        need(name in STRATEGIES, "experiment.strategies", f"unknown strategy {name!r}")
    need(e.sigma >= 0, "experiment.sigma", "must be >= 0")
    need(all(x >= 0 for x in e.sigmas), "experiment.sigmas", "must be >= 0")
    need(e.grid_resolution > 0, "experiment.grid_resolution", "must be positive")
    for fmt in cfg.output.formats:
        need(fmt in ("json", "csv"), "output.formats", f"unknown format {fmt!r}")
    return cfg


def _apply_override(data: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r}: expected key=value")
    key, raw = assignment.split("=", 1)
    parts = key.strip().split(".")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = data
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"{key}: cannot override inside a non-object")
    node[parts[-1]] = value


def parse_config(path: str | os.PathLike | None = None, overrides: list[str] | None = None) -> RunConfig:
    """Load ``path`` (or $UAVROT_CONFIG), apply ``key=value`` overrides, fill defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG) or None
    data: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        text = p.read_text()
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    for item in overrides or []:
        _apply_override(data, item)
    return validate(_build(RunConfig, data, ""))
