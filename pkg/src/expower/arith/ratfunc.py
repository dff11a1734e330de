"""Rational functions over Q in canonical form.

A RatFunc is ``num/den`` with ``gcd(num, den) = 1`` and ``den`` monic under
graded-lex, so structural equality is mathematical equality.
"""

from fractions import Fraction

from .poly import ONE, ZERO, MultiPoly, _gcd, as_poly, poly_gcd
from .rational import as_rational


def _normalize(num, den):
    if not den.terms:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num.terms:
        return ZERO, ONE
    if not den.variables:
        c = den.constant_value()
        return (num if c == 1 else num * (1 / c)), ONE
    if num.variables:
        g = _gcd(num, den)
        if g.variables:
            num, den = num.exact_div(g), den.exact_div(g)
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num * (1 / lc), den * (1 / lc)
    return num, den


class RatFunc:
    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=1):
        self.num, self.den = _normalize(as_poly(num), as_poly(den))
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den, obj._hash = num, den, None
        return obj

    @classmethod
    def var(cls, name):
        return cls._raw(MultiPoly.var(name), ONE)

    @classmethod
    def constant(cls, c):
        return cls._raw(MultiPoly.constant(c), ONE)

    # -- queries -----------------------------------------------------------

    @property
    def variables(self):
        return tuple(sorted(set(self.num.variables) | set(self.den.variables)))

    def __bool__(self):
        return bool(self.num.terms)

    def is_constant(self):
        return not self.num.variables and not self.den.variables

    def is_polynomial(self):
        return not self.den.variables

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("rational function is not constant")
        return self.num.constant_value()

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, MultiPoly)):
            return not self.den.variables and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            return RatFunc._raw(self.num + self.den * other, self.den)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den == other.den:
            return RatFunc._from(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if not g.variables:
            return RatFunc._raw(self.num * other.den + other.num * self.den,
                                self.den * other.den)
        da, db = self.den.exact_div(g), other.den.exact_div(g)
        return RatFunc._from(self.num * db + other.num * da, self.den * db)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(ZERO, ONE)
            return RatFunc._raw(self.num * other, self.den)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num.terms or not other.num.terms:
            return RatFunc._raw(ZERO, ONE)
        if not self.den.variables and not other.den.variables:
            return RatFunc._raw(self.num * other.num, ONE)
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = _gcd(a, d) if a.variables and d.variables else ONE
        g2 = _gcd(c, b) if c.variables and b.variables else ONE
        if g1.variables:
            a, d = a.exact_div(g1), d.exact_div(g1)
        if g2.variables:
            c, b = c.exact_div(g2), b.exact_div(g2)
        num, den = a * c, b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return RatFunc._raw(num, den)

    __rmul__ = __mul__

    def inv(self):
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        lc = self.num.leading_coefficient()
        return RatFunc._raw(self.den * (1 / lc), self.num * (1 / lc))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("rational function division by zero")
            return self * (1 / Fraction(other))
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("rational function powers must be integers")
        if k < 0:
            return self.inv() ** (-k)
        return RatFunc._raw(self.num ** k, self.den ** k)

    @classmethod
    def _from(cls, num, den):
        return cls._raw(*_normalize(num, den))

    # -- evaluation, calculus ---------------------------------------------

    def evaluate(self, point):
        """Substitute values; a full assignment returns a Fraction."""
        num = self.num.evaluate(point)
        den = self.den.evaluate(point)
        if isinstance(den, Fraction):
            if not den:
                raise ZeroDivisionError("evaluation at a pole")
            if isinstance(num, Fraction):
                return num / den
        elif not den:
            raise ZeroDivisionError("evaluation at a pole")
        return RatFunc(num, den)

    def diff(self, var):
        n, d = self.num, self.den
        if var not in n.variables and var not in d.variables:
            return RatFunc._raw(ZERO, ONE)
        return RatFunc(n.diff(var) * d - n * d.diff(var), d * d)

    def compose(self, mapping, zero=0):
        return self.num.compose(mapping, zero) / self.den.compose(mapping, zero)

    def __str__(self):
        if not self.den.variables:
            return str(self.num)
        ns = str(self.num)
        if len(self.num.terms) > 1:
            ns = f"({ns})"
        if len(self.den.terms) == 1 and len(self.den.variables) == 1:
            return f"{ns}/{self.den}"
        return f"{ns}/({self.den})"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc._raw(x, ONE)
    if isinstance(x, (int, Fraction)):
        return RatFunc._raw(MultiPoly.constant(x), ONE)
    return NotImplemented


def as_ratfunc(x):
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a rational function")
    return r


def canon(x):
    """Canonical scalar: constants become Fractions, everything else a RatFunc."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    r = as_ratfunc(x)
    return r.constant_value() if r.is_constant() else r


def ratfun_arith(op, a, b=None):
    """Dispatch ``add, mul, inv, normalize, eval`` on rational functions.

    ``normalize`` takes a ``(num, den)`` pair of polynomials; ``eval`` takes a
    point mapping in ``b``.
    """
    if op == "normalize":
        num, den = a
        return RatFunc(num, den)
    a = as_ratfunc(a)
    if op == "inv":
        return a.inv()
    if op == "eval":
        return a.evaluate({k: as_rational(v) for k, v in b.items()})
    b = as_ratfunc(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown rational-function op {op!r}")
