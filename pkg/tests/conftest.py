from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from mpquea import build_cartan

settings.register_profile(
    "exact",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")

PSI_A2 = ((Fraction(0), Fraction(1, 6)), (Fraction(-1, 6), Fraction(0)))


@pytest.fixture
def A1():
    return build_cartan("A1")


@pytest.fixture
def A2():
    return build_cartan("A2")


@pytest.fixture
def B2():
    return build_cartan("B2")


@pytest.fixture
def psi_a2():
    return PSI_A2


_ACCEPTANCE: list = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
