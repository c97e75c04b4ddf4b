import numpy as np
import pytest

from holozero.demos import polynomial_handle
from holozero.handle import FunctionHandle


@pytest.fixture
def poly():
    return polynomial_handle


def exp_handle():
    return FunctionHandle(np.exp, np.exp, name="exp")


def power_handle(k: int, shift: complex = 0.0):
    return FunctionHandle(lambda z: (z - shift) ** k, lambda z: k * (z - shift) ** (k - 1), name=f"z^{k}")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
