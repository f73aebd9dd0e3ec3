"""Exact rational scalars and their wire format.

Every number in the package is a `fractions.Fraction` in lowest terms.
Inputs are converted exactly or rejected; there is no rounding anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class InexactNumberError(ValueError):
    """A numeric input cannot be converted to a rational without guessing."""


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepted: int, Fraction (and anything exposing integer
    numerator/denominator), and strings like ``"3"``, ``"-3/2"``, ``"0.5"``.
    A float is accepted only when its shortest decimal form denotes exactly
    the same number (``0.5`` yes, ``0.1`` no), so no binary rounding error
    can sneak in silently.
    """
    if isinstance(value, bool):
        raise InexactNumberError("booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InexactNumberError(f"non-finite float {value!r}")
        exact = Fraction(value)
        if Fraction(repr(value)) != exact:
            raise InexactNumberError(
                f"float {value!r} does not represent its decimal form exactly; "
                f"pass a string such as {repr(repr(value))} instead"
            )
        return exact
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InexactNumberError(f"cannot parse rational from {value!r}: {exc}") from None
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if isinstance(numerator, int) and isinstance(denominator, int):
        return Fraction(numerator, denominator)
    raise InexactNumberError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(value: Fraction) -> str:
    """Canonical wire form: ``"p"`` for integers, ``"p/q"`` otherwise."""
    return str(to_fraction(value))
