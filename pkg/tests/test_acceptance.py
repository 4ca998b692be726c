"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (also collected in the terminal
summary) and fails when its bound is not met.
"""

import json
import math
import time

import numpy as np
import pytest

from uavrot.beamforming import GridSpec, gain_bruteforce, gain_closed_form, mrt_weights, rotated_gain
from uavrot.channel import channel
from uavrot.cli import main
from uavrot.experiments import (
    Deployment,
    NoiseSpec,
    PlacementSpec,
    interference_heatmap,
    monte_carlo,
    perturb_positions,
    place_gus,
    robustness_sweep,
    sample_gus,
    stream,
)
from uavrot.geometry import LinkGeometry, Position3D, link_geometry, rotate
from uavrot.network import sum_rate
from uavrot.optimizer import OptimizerConfig, aur, exhaustive_search, fixed_baseline

TABLE1 = PlacementSpec(radius=500.0, min_distance=200.0, K=10, seed=2025)
TRIALS = 50


def triples(seed, n):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        uav = Position3D(*rng.uniform(-1000, 1000, 2), float(rng.uniform(20, 500)))
        t = Position3D(*rng.uniform(-1500, 1500, 2), 0.0)
        v = Position3D(*rng.uniform(-1500, 1500, 2), 0.0)
        out.append((link_geometry(uav, t), link_geometry(uav, v)))
    return out


def test_c01_oracle_equivalence(verdict):
    start = time.perf_counter()
    worst = 0.0
    pairs = triples(101, 10_000)
    for M in (2, 4, 8, 16, 32):
        for t, v in pairs:
            worst = max(worst, abs(gain_closed_form(t, v, M) - gain_bruteforce(t, v, M)))
    elapsed = time.perf_counter() - start
    verdict(1, worst < 1e-10 and elapsed < 60.0,
            f"max |closed - brute| = {worst:.3e} over 50000 cases (< 1e-10), {elapsed:.1f} s (< 60 s)")


def test_c02_quarter_turn_periodicity(verdict):
    omegas = np.linspace(-math.pi, math.pi, 50)
    worst = 0.0
    for t, v in triples(202, 1000):
        for w in omegas:
            worst = max(worst, abs(rotated_gain(t, v, 8, w) - rotated_gain(t, v, 8, w + math.pi / 2)))
    rng = np.random.default_rng(7)
    worst_rate = 0.0
    for trial in range(5):
        sc = place_gus(Deployment(), TABLE1, trial)
        for _ in range(10):
            rot = rng.uniform(0, math.pi / 2, 3)
            worst_rate = max(worst_rate, abs(sum_rate(sc, rot).sum_rate - sum_rate(sc, rot + math.pi / 2).sum_rate))
    verdict(2, worst < 1e-9 and worst_rate < 1e-9,
            f"max gain diff {worst:.3e}, max sum-rate diff {worst_rate:.3e} bits/s/Hz (< 1e-9)")


def test_c03_mrt_serving_invariance(verdict):
    worst = 0.0
    count = 0
    for trial in range(3):
        sc = place_gus(Deployment(), TABLE1, trial)
        arr = sc.array
        for uav, cell in zip(sc.uavs, sc.gus):
            for gu in cell:
                g0 = link_geometry(uav, gu)
                for w in np.linspace(0, 2 * math.pi, 37):
                    h = channel(rotate(g0, w), arr)
                    worst = max(worst, abs(abs(h @ mrt_weights(h)) ** 2 - 1.0))
                    count += 1
    verdict(3, worst < 1e-12, f"max ||h f|^2 - 1| = {worst:.3e} over {count} GU-rotation pairs (< 1e-12)")


def test_c04_aur_monotone_convergence(verdict):
    cfg = OptimizerConfig(W=8, L=20, epsilon=1e-6)
    dep = Deployment(M=8)
    iters, monotone, converged = [], True, True
    for trial in range(TRIALS):
        res = aur(place_gus(dep, TABLE1, trial), cfg)
        monotone &= all(b >= a for a, b in zip(res.trace, res.trace[1:]))
        converged &= res.converged and res.iterations <= 20
        iters.append(res.iterations)
    iters = np.array(iters)
    hist = {int(k): int(c) for k, c in zip(*np.unique(iters, return_counts=True))}
    soft = "median <= 6" if np.median(iters) <= 6 else "median > 6 (soft)"
    verdict(4, monotone and converged,
            f"monotone={monotone}, converged within 20={converged}; iterations {hist}, "
            f"median {np.median(iters):g} ({soft})")


def test_c05_aur_vs_exhaustive(verdict):
    dep = Deployment(M=8)
    parts, ok = [], True
    for W in (4, 8):
        a_rates, e_rates, dominated = [], [], True
        for trial in range(TRIALS):
            sc = place_gus(dep, TABLE1, trial)
            a = aur(sc, OptimizerConfig(W=W)).sum_rate
            e = exhaustive_search(sc, W).sum_rate
            dominated &= e >= a
            a_rates.append(a)
            e_rates.append(e)
        ratio = float(np.mean(a_rates) / np.mean(e_rates))
        ok &= dominated and ratio >= 0.99
        parts.append(f"W={W}: exhaustive>=aur every trial={dominated}, mean ratio {ratio:.5f}")
    verdict(5, ok, "; ".join(parts) + " (>= 0.99)")


@pytest.mark.slow
def test_c06_rotation_gain(verdict):
    parts, ok = [], True
    start = time.perf_counter()
    for M in (8, 16, 32):
        s = monte_carlo(Deployment(M=M), TABLE1, OptimizerConfig(W=32), ("fixed", "aur"), TRIALS)
        g = s.gain()
        ok &= g >= 0.05
        parts.append(f"M={M}: {100 * g:.2f}%")
    elapsed = time.perf_counter() - start
    verdict(6, ok, "mean AUR gain at 50 dBm, W=32: " + ", ".join(parts) + f" (>= 5% each), {elapsed:.1f} s")


@pytest.mark.slow
def test_c07_robustness_shape(verdict):
    cfg = OptimizerConfig(W=32)
    sweeps = {M: robustness_sweep(Deployment(M=M), TABLE1, cfg, [0.0, 20.0, 60.0, 100.0], trials=TRIALS)
              for M in (8, 32)}
    s8 = sweeps[8]
    g0 = s8[0.0].gain()
    retain = s8[20.0].gain() / g0
    g100, se100 = s8[100.0].gain(), s8[100.0].gain_stderr()
    norm8 = s8[60.0].gain() / g0
    norm32 = sweeps[32][60.0].gain() / sweeps[32][0.0].gain()
    a, b, c = retain >= 0.8, abs(g100) <= se100, norm8 > norm32
    verdict(7, a and b and c,
            f"M=8 retention at 20 m {100 * retain:.1f}% (>= 80%: {a}); "
            f"gain at 100 m {100 * g100:.3f}% +- {100 * se100:.3f}% (within 1 SE of 0: {b}); "
            f"normalized gain at 60 m M=8 {norm8:.3f} vs M=32 {norm32:.3f} (M=8 higher: {c})")


def test_c08_heatmap_reduction(verdict):
    sc = place_gus(Deployment(M=8), TABLE1, 0)
    rot = aur(sc, OptimizerConfig(W=32)).rotations
    grid = GridSpec(0.0, 1500.0, 0.0, 2000.0, 10.0)
    zero = interference_heatmap(sc, (0.0, 0.0, 0.0), grid).mean()
    opt = interference_heatmap(sc, rot, grid).mean()
    verdict(8, opt <= zero,
            f"mean ground interference AUR {opt:.4e} W vs zero {zero:.4e} W (ratio {opt / zero:.3f} <= 1), "
            f"rotations/pi = {', '.join(f'{w / math.pi:.3f}' for w in rot)}")


def test_c09_montecarlo_determinism(verdict, tmp_path):
    dirs = [tmp_path / "a", tmp_path / "b"]
    codes = [main(["montecarlo", "--out", str(d)]) for d in dirs]
    same = all((dirs[0] / f).read_bytes() == (dirs[1] / f).read_bytes() for f in ("trials.csv", "summary.json"))
    gain = json.loads((dirs[0] / "summary.json").read_text())["strategies"]["aur"]["gain_vs_fixed"]
    verdict(9, codes == [0, 0] and same,
            f"two default montecarlo runs byte-identical: {same} (default-config gain reported {100 * gain:.2f}%)")


def test_c10_sampler_statistics(verdict):
    spec = PlacementSpec(radius=500.0, min_distance=200.0, K=100_000, seed=11)
    pts = sample_gus((0.0, 0.0), spec, stream(11, 0, 0, 0))
    r = np.hypot([p.x for p in pts], [p.y for p in pts])
    analytic = (2.0 / 3.0) * (500.0**3 - 200.0**3) / (500.0**2 - 200.0**2)
    rel_r = abs(r.mean() / analytic - 1.0)

    cells = [[Position3D(0.0, 0.0, 0.0)] * 50_000, [Position3D(0.0, 0.0, 0.0)] * 50_000]
    sc = Deployment(uavs=(Position3D(0, 0, 200), Position3D(1000, 0, 200))).populate(cells)
    sigma = 30.0
    noisy = perturb_positions(sc, NoiseSpec(sigma), stream(11, 0, 1))
    off = np.array([[g.x, g.y] for cell in noisy.gus for g in cell])
    rel_s = float(np.max(np.abs(off.std(axis=0) / sigma - 1.0)))
    verdict(10, rel_r < 0.01 and rel_s < 0.02,
            f"mean radius {r.mean():.3f} vs analytic {analytic:.3f} (rel err {100 * rel_r:.3f}% < 1%); "
            f"perturbation std rel err {100 * rel_s:.3f}% (< 2%) over 1e5 draws")
