import math
from fractions import Fraction as F

import pytest

from tangentfit.arrangement import Polytope
from tangentfit.fitting import Observation


def triangle():
    # x1 <= 0, x2 <= 0, x1 + x2 >= -1
    return Polytope.from_halfspaces([((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)])


def unit_square():
    # [-1, 0]^2
    return Polytope.from_halfspaces([((1, 0), 0), ((-1, 0), -1), ((0, 1), 0), ((0, -1), -1)])


def quadrilateral():
    # vertices (0,0), (3/2,0), (1,1), (0,4/3)
    return Polytope.from_halfspaces([((0, -1), 0), ((-1, 0), 0), ((2, 1), -3), ((1, 3), -4)])


def simplex3():
    return Polytope.from_halfspaces([((-1, 0, 0), 0), ((0, -1, 0), 0), ((0, 0, -1), 0), ((1, 1, 1), -1)])


def box3():
    return Polytope.from_halfspaces(
        [((1, 0, 0), -1), ((-1, 0, 0), 0), ((0, 1, 0), -2), ((0, -1, 0), 0), ((0, 0, 1), F(-1, 2)), ((0, 0, -1), 0)]
    )


def pentagon(max_denominator=10**6):
    hs = [((math.cos(2 * i * math.pi / 5), math.sin(2 * i * math.pi / 5)), -math.cos(math.pi / 5)) for i in range(1, 6)]
    return Polytope.from_halfspaces(hs, max_denominator=max_denominator)


def hexagon():
    return Polytope.from_halfspaces(
        [((1, 0), -1), ((1, 1), F(-3, 2)), ((0, 1), -1), ((-1, 0), -1), ((-1, -1), F(-6, 5)), ((0, -1), F(-4, 5))]
    )


PENTAGON_DATA = [
    ((F(-1, 3), F(-7, 10)), (3, 0)),
    ((F(1, 4), F(1, 10)), (0, 0)),
    ((F(-4, 5), 0), (-2, 4)),
    ((F(1, 3), F(7, 10)), (2, 0)),
    ((F(1, 5), F(-1, 2)), (2, -1)),
    ((F(1, 5), F(1, 2)), (0, 0)),
]


def pentagon_observations(n=4):
    return [Observation(x, u) for x, u in PENTAGON_DATA[:n]]


ORACLE_CASES = {
    "triangle": triangle,
    "unit_square": unit_square,
    "quadrilateral": quadrilateral,
    "simplex3": simplex3,
    "box3": box3,
}


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture(scope="session")
def pent():
    return pentagon()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for line in results:
        terminalreporter.write_line(line)
