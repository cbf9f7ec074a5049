from fractions import Fraction

import pytest

from l0lab.prob_space import make_finite_space, make_geometric_space


@pytest.fixture
def f3():
    return make_finite_space([Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])


@pytest.fixture
def u3():
    return make_finite_space([Fraction(1, 3)] * 3)


@pytest.fixture
def geo():
    return make_geometric_space(64)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
