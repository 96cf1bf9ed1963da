import numpy as np
import pytest

from polymult import examples
from polymult.geometry import HalfSpaceSystem

INTERVAL = HalfSpaceSystem([[1], [-1]], [0, 4])
INTERVAL2 = HalfSpaceSystem([[1], [-1]], [0, 2])
TRIANGLE = HalfSpaceSystem([[1, 0], [0, 1], [-1, -1]], [0, 0, 3])
POINT = HalfSpaceSystem([[1], [-1]], [0, 0])
SKEW = HalfSpaceSystem([[1], [1], [-2]], [0, 0, 3])
DIAGONAL = HalfSpaceSystem([[1, -1], [-1, 1], [1, 1], [-1, -1]], [0, 0, 0, 4])

BUNDLED = {name: examples.load(name) for name in examples.NAMES}


def interval(l):
    return HalfSpaceSystem([[1], [-1]], [0, l])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_acceptance_lines = []


def record_acceptance(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
