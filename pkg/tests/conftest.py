import numpy as np
import pytest

from cfsval.manipulator import REFERENCE_ARCH

SCENARIO_1 = dict(c=[-0.2301, 0.0413, 3.0209], r3=188.4, delta_r=10.0, pairs=[(1, 2)])
SCENARIO_2 = dict(c=[0.2534, 0.6740, 0.2653], r3=13.5, delta_r=1.0, pairs="all")

_acceptance_lines = []


def record(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def arch():
    return REFERENCE_ARCH


@pytest.fixture
def rng():
    return np.random.default_rng(20241018)
