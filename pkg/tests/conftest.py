import numpy as np
import pytest

from wpolar.core_linalg import Tolerance, random_instance

ACCEPTANCE_LINES = []


@pytest.fixture
def tol():
    return Tolerance()


@pytest.fixture
def pd():
    def make(n, seed, cond=100.0):
        return random_instance("positive_definite", n, seed, cond)
    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
