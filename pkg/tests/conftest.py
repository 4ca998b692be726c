import math

import numpy as np
import pytest

from uavrot.channel import RadioConfig
from uavrot.geometry import Position3D
from uavrot.network import Scenario

DESK_UAVS = (
    Position3D(500.0, 500.0, 200.0),
    Position3D(500.0, 1500.0, 200.0),
    Position3D(1000.0, 1500.0, 200.0),
)
DESK_GUS = (
    ((700.0, 450.0), (380.0, 820.0)),
    ((300.0, 1350.0), (760.0, 1700.0)),
    ((1250.0, 1400.0), (900.0, 1900.0)),
)


def desk_scenario(M=8, radio=None):
    cells = [[Position3D(x, y, 0.0) for x, y in cell] for cell in DESK_GUS]
    return Scenario(DESK_UAVS, cells, M, radio or RadioConfig())


@pytest.fixture
def desk():
    return desk_scenario()


def random_triples(rng, n, spread=800.0):
    """(uav, target, victim) with the UAV at a random altitude over random ground points."""
    out = []
    for _ in range(n):
        uav = Position3D(*rng.uniform(-200, 200, 2), float(rng.uniform(50, 400)))
        t = Position3D(*rng.uniform(-spread, spread, 2), 0.0)
        v = Position3D(*rng.uniform(-spread, spread, 2), 0.0)
        out.append((uav, t, v))
    return out


ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[n] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
