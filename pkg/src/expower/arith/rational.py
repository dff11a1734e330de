"""Exact rationals.

``Rational`` is :class:`fractions.Fraction`; it already keeps numerator and
denominator in lowest terms with a positive denominator.
"""

from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction


def as_rational(x):
    """Coerce an int, Fraction or ``"a/b"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.replace(" ", ""))
    if isinstance(x, _RationalABC):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def rational_arith(op, a, b=None):
    """Dispatch one of ``add, sub, mul, div, neg, cmp`` on exact rationals.

    ``cmp`` returns -1, 0 or 1. Division by zero raises ZeroDivisionError.
    """
    a = as_rational(a)
    if op == "neg":
        return -a
    b = as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    if op == "cmp":
        return (a > b) - (a < b)
    raise ValueError(f"unknown rational op {op!r}")
