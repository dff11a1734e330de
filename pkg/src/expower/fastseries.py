"""Truncated series over Q for the hot loops of the relation search.

Two interchangeable backends with the small interface the search needs
(``+``, ``-``, ``*``, ``truncate``, ``valuation``, ``is_zero_upto``,
``terms``). With FLINT available a series in m variables truncated at total
degree T is packed into one univariate polynomial: the monomial
``t^e`` (total degree d) goes to the index ``d*B^(m-1) + sum_{i<m-1} e_i B^i``
with ``B = 2T + 1``. Digits never carry in a product of two truncated
series, and the total degree is the leading digit, so truncation by total
degree is truncation of the packed polynomial.
"""

from fractions import Fraction

try:
    import flint as _flint
except ImportError:  # pragma: no cover
    _flint = None
try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    _mpq = Fraction


def _frac(c):
    c = Fraction(c)
    return c.numerator, c.denominator


class DictSeries:
    """Sparse dictionary backend on gmpy2 rationals."""

    __slots__ = ("terms_", "order", "nvars")

    def __init__(self, terms, order, nvars):
        self.terms_ = terms
        self.order = order
        self.nvars = nvars

    @classmethod
    def of(cls, s):
        return cls({e: _mpq(*_frac(c)) for e, c in s.terms.items() if sum(e) <= s.order},
                   s.order, len(s.variables))

    @classmethod
    def one(cls, order, nvars):
        return cls({(0,) * nvars: _mpq(1)}, order, nvars)

    @property
    def certified(self):
        return self.order

    @property
    def terms(self):
        return self.terms_

    def _lift(self, c):
        if isinstance(c, DictSeries):
            return c
        return DictSeries({(0,) * self.nvars: _mpq(*_frac(c))} if c else {}, self.order, self.nvars)

    def __add__(self, other):
        out = dict(self.terms_)
        for e, c in self._lift(other).terms_.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        return DictSeries(out, self.order, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return DictSeries({e: -c for e, c in self.terms_.items()}, self.order, self.nvars)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        if not isinstance(other, DictSeries):
            c = _mpq(*_frac(other))
            terms = {e: x * c for e, x in self.terms_.items()} if c else {}
            return DictSeries(terms, self.order, self.nvars)
        out = {}
        order = self.order
        for ea, ca in self.terms_.items():
            da = sum(ea)
            for eb, cb in other.terms_.items():
                if da + sum(eb) <= order:
                    key = tuple(x + y for x, y in zip(ea, eb))
                    out[key] = out.get(key, 0) + ca * cb
        return DictSeries({e: v for e, v in out.items() if v}, order, self.nvars)

    __rmul__ = __mul__

    def truncate(self, order):
        return DictSeries({e: c for e, c in self.terms_.items() if sum(e) <= order},
                          order, self.nvars)

    def is_zero_upto(self, order=None):
        order = self.order if order is None else order
        return not any(sum(e) <= order for e in self.terms_)

    def valuation(self):
        return min((sum(e) for e in self.terms_), default=None)


class FlintSeries:
    """Kronecker-packed FLINT backend (see the module docstring)."""

    __slots__ = ("poly", "order", "nvars", "base")

    def __init__(self, poly, order, nvars, base):
        self.poly = poly
        self.order = order
        self.nvars = nvars
        self.base = base

    @property
    def _block(self):
        return self.base ** (self.nvars - 1) if self.nvars else 1

    def _index(self, e):
        idx = sum(e) * self._block
        for i in range(self.nvars - 1):
            idx += e[i] * self.base ** i
        return idx

    @classmethod
    def of(cls, s):
        n = len(s.variables)
        out = cls(None, s.order, n, 2 * s.order + 1)
        coeffs = {}
        for e, c in s.terms.items():
            if sum(e) <= s.order:
                coeffs[out._index(e)] = _flint.fmpq(*_frac(c))
        dense = [_flint.fmpq(0)] * (max(coeffs) + 1 if coeffs else 0)
        for i, c in coeffs.items():
            dense[i] = c
        out.poly = _flint.fmpq_poly(dense)
        return out

    @classmethod
    def one(cls, order, nvars):
        return cls(_flint.fmpq_poly([1]), order, nvars, 2 * order + 1)

    @property
    def certified(self):
        return self.order

    @property
    def terms(self):
        out = {}
        block = self._block
        for i, c in enumerate(self.poly.coeffs()):
            if not c:
                continue
            d, rest = divmod(i, block)
            e = []
            for _ in range(self.nvars - 1):
                rest, x = divmod(rest, self.base)
                e.append(x)
            if self.nvars:
                e.append(d - sum(e))
            out[tuple(e)] = Fraction(int(c.p), int(c.q))
        return out

    def _new(self, poly):
        return FlintSeries(poly, self.order, self.nvars, self.base)

    def _lift(self, c):
        if isinstance(c, FlintSeries):
            return c.poly
        return _flint.fmpq_poly([_flint.fmpq(*_frac(c))])

    def __add__(self, other):
        return self._new(self.poly + self._lift(other))

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.poly)

    def __sub__(self, other):
        return self._new(self.poly - self._lift(other))

    def __mul__(self, other):
        if not isinstance(other, FlintSeries):
            return self._new(self.poly * _flint.fmpq(*_frac(other)))
        return self._new(self.poly.mul_low(other.poly, (self.order + 1) * self._block))

    __rmul__ = __mul__

    def truncate(self, order):
        return FlintSeries(self.poly.truncate((order + 1) * self._block), order,
                           self.nvars, self.base)

    def is_zero_upto(self, order=None):
        order = self.order if order is None else order
        return self.poly.truncate((order + 1) * self._block).is_zero()

    def valuation(self):
        for i, c in enumerate(self.poly.coeffs()):
            if c:
                return i // self._block
        return None


Series = FlintSeries if _flint is not None else DictSeries


def fast(s):
    """Convert a rational TruncatedSeries to the fastest available backend."""
    return Series.of(s)


class ParamPacking:
    """Kronecker layout for series in t whose coefficients are polynomials
    in the parameters p_1..p_r.

    The parameter exponents are the low digits (base ``pbase``) below the
    t-digits of the layout above, so a product of two packed series stays
    exact as long as every parameter degree that can occur is < ``pbase``.
    """

    def __init__(self, variables, params, order, pbase):
        self.variables = tuple(variables)
        self.params = tuple(params)
        self.order = order
        self.pbase = pbase
        self.tbase = 2 * order + 1
        n = len(self.variables)
        self.tblock = self.tbase ** (n - 1) if n else 1
        self.pblock = pbase ** len(self.params)
        self.length = (order + 1) * self.tblock * self.pblock

    def index(self, texp, pexp=()):
        ti = sum(texp) * self.tblock
        for i in range(len(texp) - 1):
            ti += texp[i] * self.tbase ** i
        pi = 0
        for i, x in enumerate(pexp):
            pi += x * self.pbase ** i
        return ti * self.pblock + pi

    def param_offsets(self, degree):
        """Packed offsets of all parameter monomials of total degree <= degree."""
        out = []

        def rec(i, left, acc, mult):
            if i == len(self.params):
                out.append(acc)
                return
            for x in range(left + 1):
                rec(i + 1, left - x, acc + x * mult, mult * self.pbase)

        rec(0, degree, 0, 1)
        return sorted(out)

    def split_offset(self, offset):
        exps = []
        for _ in self.params:
            offset, x = divmod(offset, self.pbase)
            exps.append(x)
        return tuple(exps)

    def _param_terms(self, c):
        """``{param exponents: Fraction}`` of a coefficient polynomial in the parameters."""
        if isinstance(c, (int, Fraction)) or not hasattr(c, "num"):
            c = Fraction(c)
            return {(0,) * len(self.params): c} if c else {}
        if c.den.variables:
            raise ValueError("coefficient has a parameter in its denominator")
        scale = 1 / c.den.constant_value()
        out = {}
        for e, x in c.num.terms.items():
            named = dict(zip(c.num.variables, e))
            if set(named) - set(self.params):
                raise ValueError("coefficient involves a non-parameter variable")
            out[tuple(named.get(p, 0) for p in self.params)] = x * scale
        return out

    def _poly(self, coeffs):
        if not coeffs:
            return _flint.fmpq_poly([])
        dense = [_flint.fmpq(0)] * (max(coeffs) + 1)
        for i, c in coeffs.items():
            dense[i] = _flint.fmpq(*_frac(c))
        return _flint.fmpq_poly(dense)

    def pack(self, s):
        coeffs = {}
        for e, c in s.terms.items():
            if sum(e) <= self.order:
                for pe, x in self._param_terms(c).items():
                    if max(pe, default=0) >= self.pbase:
                        raise ValueError("parameter degree exceeds the packing base")
                    coeffs[self.index(e, pe)] = x
        return PackedParamSeries(self._poly(coeffs), self)

    def constant(self, c):
        coeffs = {}
        for pe, x in self._param_terms(c).items():
            coeffs[self.index((0,) * len(self.variables), pe)] = x
        return PackedParamSeries(self._poly(coeffs), self)

    def one(self):
        return PackedParamSeries(_flint.fmpq_poly([1]), self)


class PackedParamSeries:
    __slots__ = ("poly", "layout")

    def __init__(self, poly, layout):
        self.poly = poly
        self.layout = layout

    def _lift(self, other):
        if isinstance(other, PackedParamSeries):
            return other.poly
        return self.layout.constant(other).poly

    def __add__(self, other):
        return PackedParamSeries(self.poly + self._lift(other), self.layout)

    __radd__ = __add__

    def __neg__(self):
        return PackedParamSeries(-self.poly, self.layout)

    def __sub__(self, other):
        return PackedParamSeries(self.poly - self._lift(other), self.layout)

    def __mul__(self, other):
        return PackedParamSeries(self.poly.mul_low(self._lift(other), self.layout.length),
                                 self.layout)

    __rmul__ = __mul__

    def shifted(self, offset):
        """Multiply by the parameter monomial at a packed offset."""
        return PackedParamSeries(self.poly.mul_low(_flint.fmpq_poly([0] * offset + [1]),
                                                   self.layout.length), self.layout)

    def is_zero_upto(self, order=None):
        return self.poly.truncate(self.layout.length).is_zero()
