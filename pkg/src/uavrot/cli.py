"""Command-line front end: ``uavrot <command> [--config FILE] [--set key=value ...]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .beamforming import GridSpec, gain_vs_rotation_curve, ground_pattern
from .channel import RadioConfig
from .config import ConfigError, RunConfig, parse_config
from .coordination import run_centralized, run_decentralized
from .experiments import (
    Deployment,
    NoiseSpec,
    PlacementSpec,
    TrialSummary,
    default_grid,
    interference_heatmap,
    monte_carlo,
    place_gus,
    power_sweep,
    robustness_sweep,
)
from .geometry import Position3D, link_geometry
from .network import Scenario
from .optimizer import BudgetExceeded, OptimizerConfig, aur, exhaustive_search, fixed_baseline
from .output import provenance, write_csv, write_json

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def deployment_from(cfg: RunConfig) -> Deployment:
    r = cfg.radio
    radio = RadioConfig(r.power_dbm, r.bandwidth_hz, r.noise_psd_dbm_hz, r.carrier_hz)
    uavs = tuple(Position3D(*map(float, p)) for p in cfg.scenario.uavs)
    return Deployment(uavs=uavs, M=cfg.array.M, radio=radio)


def placement_from(cfg: RunConfig) -> PlacementSpec:
    s = cfg.scenario
    return PlacementSpec(radius=s.radius, min_distance=s.min_distance, K=s.gus_per_cell, seed=cfg.experiment.seed)


def optimizer_from(cfg: RunConfig) -> OptimizerConfig:
    o = cfg.optimizer
    return OptimizerConfig(W=o.W, L=o.L, epsilon=o.epsilon)


def scenario_from(cfg: RunConfig) -> Scenario:
    dep = deployment_from(cfg)
    if cfg.scenario.gus is not None:
        cells = [[Position3D(float(p[0]), float(p[1]), 0.0) for p in cell] for cell in cfg.scenario.gus]
        return dep.populate(cells)
    return place_gus(dep, placement_from(cfg), cfg.experiment.trial)


def _point(text: str, dims: int) -> tuple[float, ...]:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != dims:
        raise ConfigError(f"expected {dims} comma-separated numbers, got {text!r}")
    return tuple(parts)


class Run:
    """Resolved config plus the output directory for one command."""

    def __init__(self, cfg: RunConfig, out: Path | None, command: str | None = None, options: dict | None = None):
        self.cfg = cfg
        self.out = Path(out) if out is not None else Path(cfg.output.directory)
        self.meta = provenance(cfg.sha256(), cfg.experiment.seed, command, options)
        self.formats = set(cfg.output.formats)

    def echo_config(self) -> None:
        write_json(self.out / "config.resolved.json", {"config": self.cfg.to_dict()}, self.meta)

    def json(self, name: str, payload: dict) -> None:
        if "json" in self.formats:
            write_json(self.out / name, payload, self.meta)

    def csv(self, name: str, header, rows) -> None:
        if "csv" in self.formats:
            write_csv(self.out / name, header, rows, self.meta)


def _result_dict(res) -> dict:
    return {
        "rotations": list(res.rotations),
        "sum_rate": res.report.sum_rate,
        "average_rate": res.report.average_rate,
        "trace": list(res.trace),
        "iterations": res.iterations,
        "evaluations": res.evaluations,
        "converged": res.converged,
    }


def cmd_optimize(run: Run, args) -> int:
    cfg = run.cfg
    scenario = scenario_from(cfg)
    opt = optimizer_from(cfg)
    strategies = args.strategies.split(",") if args.strategies else ["fixed", "aur", "exhaustive"]
    results = {}
    coordination = None
    for name in strategies:
        if name == "fixed":
            results[name] = fixed_baseline(scenario)
        elif name == "aur":
            runner = run_decentralized if args.mode == "decentralized" else run_centralized
            res, log = runner(scenario, opt)
            results[name] = res
            coordination = log
        elif name == "exhaustive":
            results[name] = exhaustive_search(scenario, opt.W, cfg.optimizer.budget)
        else:
            raise ConfigError(f"--strategies: unknown strategy {name!r}")
    payload = {
        "scenario": {
            "uavs": [u.as_tuple() for u in scenario.uavs],
            "gus": [[(g.x, g.y) for g in cell] for cell in scenario.gus],
        },
        "strategies": {k: _result_dict(v) for k, v in results.items()},
    }
    run.json("summary.json", payload)
    if coordination is not None:
        run.json(
            "coordination.json",
            {
                "mode": coordination.mode,
                "trigger": coordination.trigger,
                "termination": coordination.termination,
                "messages_per_iteration": coordination.messages_per_iteration,
                "forwards": coordination.records(),
            },
        )
    for k, v in results.items():
        print(f"{k:>10}: R = {v.report.sum_rate:.6f}  R_avg = {v.report.average_rate:.6f}  "
              f"omega = {', '.join(f'{w:.4f}' for w in v.rotations)}")
    return EXIT_OK


def _trial_rows(summary: TrialSummary, extra: tuple = ()):
    for r in summary.records:
        yield (*extra, r.trial, r.strategy, r.average_rate, r.sum_rate,
               ";".join(format(w, ".17g") for w in r.rotations), r.iterations, r.converged)


TRIAL_HEADER = ["trial", "strategy", "average_rate", "sum_rate", "rotations", "iterations", "converged"]


def cmd_montecarlo(run: Run, args) -> int:
    cfg = run.cfg
    sigma = cfg.experiment.sigma
    summary = monte_carlo(
        deployment_from(cfg), placement_from(cfg), optimizer_from(cfg),
        cfg.experiment.strategies, cfg.experiment.trials, NoiseSpec(sigma), cfg.optimizer.budget,
    )
    run.json("summary.json", summary.to_dict())
    run.csv("trials.csv", TRIAL_HEADER, _trial_rows(summary))
    for s in summary.strategies:
        line = f"{s:>10}: mean R_avg = {summary.mean(s):.6f} (std {summary.std(s):.6f})"
        if s != "fixed" and "fixed" in summary.strategies:
            line += f"  gain vs fixed = {100 * summary.gain(s):.3f}%"
        print(line)
    return EXIT_OK


def cmd_sweep(run: Run, args) -> int:
    cfg = run.cfg
    dep, spec, opt = deployment_from(cfg), placement_from(cfg), optimizer_from(cfg)
    e = cfg.experiment
    if args.axis == "power":
        points = power_sweep(dep, spec, opt, e.powers_dbm, e.strategies, e.trials, None, cfg.optimizer.budget)
        label = "power_dbm"
    else:
        points = robustness_sweep(dep, spec, opt, e.sigmas, e.strategies, e.trials, cfg.optimizer.budget)
        label = "sigma_m"
    run.json("summary.json", {"axis": label, "points": [{label: k, **v.to_dict()} for k, v in points.items()]})
    run.csv("trials.csv", [label, *TRIAL_HEADER],
            (row for k, v in points.items() for row in _trial_rows(v, (k,))))
    for k, v in points.items():
        parts = [f"{s}={v.mean(s):.4f}" for s in v.strategies]
        print(f"{label}={k:g}: " + "  ".join(parts))
    return EXIT_OK


def cmd_heatmap(run: Run, args) -> int:
    cfg = run.cfg
    scenario = scenario_from(cfg)
    if args.rotations == "zero":
        rotations, tag = (0.0,) * scenario.n_cells, "zero"
    elif args.rotations == "aur":
        rotations, tag = aur(scenario, optimizer_from(cfg)).rotations, "aur"
    else:
        rotations = tuple(float(v) for v in args.rotations.split(","))
        if len(rotations) != scenario.n_cells:
            raise ConfigError(f"--rotations: expected {scenario.n_cells} angles, got {len(rotations)}")
        tag = args.tag or "custom"
    grid = default_grid(scenario, cfg.scenario.radius, cfg.experiment.grid_resolution)
    hm = interference_heatmap(scenario, rotations, grid)
    dbm = hm.interference_dbm
    rows = ((x, y, v, d) for x, y, v, d in zip(hm.x.ravel(), hm.y.ravel(), hm.interference.ravel(), dbm.ravel()))
    run.csv(f"heatmap_{tag}.csv", ["x", "y", "value_watts", "value_dbm"], rows)
    print(f"heatmap_{tag}: rotations = {', '.join(f'{w:.4f}' for w in rotations)}  mean = {hm.mean():.6e} W")
    return EXIT_OK


def cmd_pattern(run: Run, args) -> int:
    cfg = run.cfg
    dep = deployment_from(cfg)
    uav = Position3D(*_point(args.uav, 3)) if args.uav else dep.uavs[args.uav_index]
    tx, ty = _point(args.target, 2)
    half = args.extent
    grid = GridSpec(uav.x - half, uav.x + half, uav.y - half, uav.y + half, cfg.experiment.grid_resolution)
    pat = ground_pattern(uav, Position3D(tx, ty, 0.0), dep.M, args.omega, grid,
                         power=dep.radio.power, wavelength=dep.radio.wavelength)
    rows = zip(pat.x.ravel(), pat.y.ravel(), pat.gain.ravel(), pat.received_power.ravel())
    run.csv("pattern.csv", ["x", "y", "gain", "received_watts"], rows)
    print(f"pattern: {pat.gain.size} points, peak gain {float(pat.gain.max()):.6f}")
    return EXIT_OK


def cmd_curve(run: Run, args) -> int:
    cfg = run.cfg
    dep = deployment_from(cfg)
    uav = Position3D(*_point(args.uav, 3)) if args.uav else dep.uavs[args.uav_index]
    target = Position3D(*_point(args.target, 2), 0.0)
    victim = Position3D(*_point(args.victim, 2), 0.0)
    curve = gain_vs_rotation_curve(link_geometry(uav, target), link_geometry(uav, victim), dep.M, args.samples)
    run.csv("curve.csv", ["omega", "gain"], curve)
    best = min(curve, key=lambda p: p[1])
    print(f"curve: {len(curve)} samples, minimum gain {best[1]:.6e} at omega = {best[0]:.6f} rad")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavrot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--config", help="JSON config file (default: $UAVROT_CONFIG, else built-in defaults)")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config field, e.g. --set array.M=16")
        p.add_argument("--out", type=Path, help="output directory (default: output.directory)")
        return p

    p = common(sub.add_parser("optimize", help="fixed / AUR / exhaustive on one scenario"))
    p.add_argument("--strategies", help="comma-separated subset of fixed,aur,exhaustive")
    p.add_argument("--mode", choices=["centralized", "decentralized"], default="decentralized")
    p.set_defaults(func=cmd_optimize)

    p = common(sub.add_parser("montecarlo", help="repeated random placements"))
    p.add_argument("--sigma", type=float, help="GU location error std in meters (sets experiment.sigma)")
    p.set_defaults(func=cmd_montecarlo)

    p = common(sub.add_parser("sweep", help="Monte Carlo over transmit power or location error"))
    p.add_argument("--axis", choices=["power", "sigma"], required=True)
    p.set_defaults(func=cmd_sweep)

    p = common(sub.add_parser("heatmap", help="ground interference map"))
    p.add_argument("--rotations", default="zero", help="zero, aur, or comma-separated radians")
    p.add_argument("--tag", help="file tag for explicit rotations")
    p.set_defaults(func=cmd_heatmap)

    for name, func, help_ in (("pattern", cmd_pattern, "beam gain over the ground"),
                              ("curve", cmd_curve, "interference gain versus yaw")):
        p = common(sub.add_parser(name, help=help_))
        p.add_argument("--uav", help="x,y,z of the UAV (default: a configured UAV)")
        p.add_argument("--uav-index", type=int, default=0)
        p.add_argument("--target", required=True, help="x,y of the served GU")
        if name == "pattern":
            p.add_argument("--omega", type=float, default=0.0)
            p.add_argument("--extent", type=float, default=500.0, help="half-width of the square grid, m")
        else:
            p.add_argument("--victim", required=True, help="x,y of the interfered GU")
            p.add_argument("--samples", type=int, default=90)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if getattr(args, "sigma", None) is not None:
        overrides.append(f"experiment.sigma={args.sigma!r}")
    options = {
        k: v for k, v in vars(args).items()
        if k not in ("func", "command", "config", "overrides", "out", "sigma") and v is not None
    }
    try:
        cfg = parse_config(args.config, overrides)
        run = Run(cfg, args.out, args.command, options)
        run.echo_config()
        return args.func(run, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, IndexError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
