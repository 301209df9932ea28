import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jbtriple.models import as_system, resolve

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# coordinates of M2(R) in the basis order E11, E12, E21, E22
E11, E12, E21, E22 = np.eye(4)


def system(spec):
    return as_system(resolve(spec))


@pytest.fixture(scope="session")
def m22():
    return system("mat:R:2:2")


@pytest.fixture(scope="session")
def sum21():
    return system("sum:mat:R:2:2+mat:R:1:1")


def mat(x):
    """Coordinates of M2(R) as a 2x2 array."""
    return np.asarray(x, dtype=float).reshape(2, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
