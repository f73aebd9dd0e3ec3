from fractions import Fraction as F

import pytest

import freelip as fl


@pytest.fixture(scope="session")
def line3():
    """The integer line {0, 1, 2}: d(i, j) = |i - j|."""
    return fl.validate(["0", "1", "2"], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture(scope="session")
def half():
    """{0, 1/2, 1} inside the unit interval."""
    return fl.validate(
        ["0", "1/2", "1"],
        [[0, F(1, 2), 1], [F(1, 2), 0, F(1, 2)], [1, F(1, 2), 0]],
    )


@pytest.fixture(scope="session")
def concave3():
    """Three points with all triangle inequalities strict: d = (1, 1, 3/2)."""
    return fl.validate(
        ["0", "1", "2"],
        [[0, 1, F(3, 2)], [1, 0, 1], [F(3, 2), 1, 0]],
    )


@pytest.fixture(scope="session")
def two_point():
    return fl.validate(["0", "1"], [[0, 1], [1, 0]])


@pytest.fixture(scope="session")
def one_point():
    return fl.validate(["0"], [[0]])
