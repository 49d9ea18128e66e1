import math

import numpy as np
import pytest

from needlecolor._rng import make_stream

SQRT3_2 = math.sqrt(3.0) / 2.0

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return make_stream(20240601)


def within_sigma(a, b, sigmas=4.0):
    """True if two estimates agree within ``sigmas`` combined standard errors."""
    return abs(a.p_hat - b.p_hat) <= sigmas * math.hypot(a.stderr, b.stderr)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
