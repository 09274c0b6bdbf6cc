import math

import pytest

from hypsweep.cli import generate_sites
from hypsweep.hgeom import PolarPoint

TRIAD = [PolarPoint(1.0, 0.0), PolarPoint(1.0, 2 * math.pi / 3), PolarPoint(1.0, 4 * math.pi / 3)]
SQUARE = [PolarPoint(1.0, k * math.pi / 2) for k in range(4)]


def random_sites(n, seed, R=5.0, alpha=1.0):
    return generate_sites(n, R, alpha, seed)


@pytest.fixture
def triad():
    return list(TRIAD)


@pytest.fixture
def square():
    return list(SQUARE)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
