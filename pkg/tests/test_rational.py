from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from freelip.rational import InexactNumberError, format_rational, to_fraction


def test_parse_forms():
    assert to_fraction("3/2") == F(3, 2)
    assert to_fraction("-3/2") == F(-3, 2)
    assert to_fraction("0.5") == F(1, 2)
    assert to_fraction("7") == 7
    assert to_fraction(7) == 7
    assert to_fraction(F(2, 4)) == F(1, 2)


def test_exact_floats_accepted():
    assert to_fraction(0.5) == F(1, 2)
    assert to_fraction(2.0) == 2


def test_inexact_floats_rejected():
    with pytest.raises(InexactNumberError):
        to_fraction(0.1)
    with pytest.raises(InexactNumberError):
        to_fraction(float("nan"))
    with pytest.raises(InexactNumberError):
        to_fraction(float("inf"))


def test_junk_rejected():
    with pytest.raises(InexactNumberError):
        to_fraction("one half")
    with pytest.raises(InexactNumberError):
        to_fraction(True)
    with pytest.raises(InexactNumberError):
        to_fraction(None)


def test_format():
    assert format_rational(F(3, 2)) == "3/2"
    assert format_rational(F(4, 2)) == "2"
    assert format_rational(F(-1, 3)) == "-1/3"


@given(st.fractions())
def test_roundtrip(q):
    assert to_fraction(format_rational(q)) == q
