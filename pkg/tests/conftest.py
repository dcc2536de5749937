import cmath
import math

import pytest

from mckay3.group import new_group, valid_groups

ACCEPTANCE_GROUPS = ["1/3(1,1,1)", "1/5(1,2,2)", "1/5(1,1,3)", "1/7(1,2,4)", "1/7(1,1,5)", "1/7(1,3,3)"]


def zeta(r, k=1):
    return cmath.exp(2j * math.pi * k / r)


@pytest.fixture
def g3():
    return new_group(3, 1, 1, 1)


@pytest.fixture
def g5():
    return new_group(5, 1, 2, 2)


@pytest.fixture
def g7():
    return new_group(7, 1, 2, 4)


SMALL_GROUPS = valid_groups(7)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
