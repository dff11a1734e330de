"""Truncated multivariate power series: a computable exponential field.

Series live in ``K[[t1..tm]]`` truncated at total degree ``order`` with
``K = Q`` or ``K = Q(p1..pk)``. ``certified`` is the degree up to which the
stored coefficients are exact; arithmetic takes the minimum over operands and
each derivation lowers it by one (unless the series is an exact polynomial).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .arith import QQ, Field, MultiPoly, RatFunc, as_ratfunc, canon, grlex_key


class SeriesDomainError(ValueError):
    """exp/log/inv applied outside its domain."""


def _is_scalar(x):
    return isinstance(x, (int, Fraction))


def _hmul(a, b, out):
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


class TruncatedSeries:
    __slots__ = ("variables", "field", "order", "certified", "terms", "exact")

    def __init__(self, variables, order, terms=None, field=QQ, certified=None, exact=False):
        variables = tuple(variables)
        if list(variables) != sorted(variables):
            perm = sorted(range(len(variables)), key=lambda i: variables[i])
            terms = {tuple(e[i] for i in perm): c for e, c in (terms or {}).items()}
            variables = tuple(variables[i] for i in perm)
        self.variables = variables
        self.field = field
        self.order = order
        self.certified = order if certified is None else min(certified, order)
        clean = {}
        for e, c in (terms or {}).items():
            if sum(e) > order:
                exact = False
                continue
            c = canon(c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean
        self.exact = exact

    @classmethod
    def _raw(cls, variables, order, terms, field, certified, exact):
        obj = cls.__new__(cls)
        obj.variables, obj.order, obj.terms, obj.field = variables, order, terms, field
        obj.certified, obj.exact = certified, exact
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables, order, field=QQ):
        return cls(variables, order, {}, field, exact=True)

    @classmethod
    def constant(cls, c, variables, order, field=QQ):
        return cls(variables, order, {(0,) * len(variables): c}, field, exact=True)

    @classmethod
    def variable(cls, name, variables, order, field=QQ):
        variables = tuple(sorted(variables))
        e = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown series variable {name!r}")
        return cls(variables, order, {e: 1}, field, exact=order >= 1)

    @classmethod
    def from_ratfunc(cls, r, variables, order, field=None):
        """Expand a rational function whose denominator is a unit in the series ring."""
        r = as_ratfunc(r)
        variables = tuple(sorted(variables))
        params = tuple(v for v in r.variables if v not in variables)
        if field is None:
            field = Field(params) if params else QQ
        stray = [v for v in params if v not in field.params]
        if stray:
            raise ValueError(f"variables {stray} are neither series variables nor in {field}")
        num = cls._from_poly(r.num, variables, order, field)
        if not r.den.variables or not set(r.den.variables) & set(variables):
            scale = canon(RatFunc(1, r.den))
            return num * scale
        den = cls._from_poly(r.den, variables, order, field)
        return num * den.inv()

    @classmethod
    def _from_poly(cls, poly, variables, order, field):
        rvars, groups = poly.split(field.params)
        stray = [v for v in rvars if v not in variables]
        if stray:
            raise ValueError(f"variables {stray} are neither series variables nor in {field}")
        idx = [rvars.index(v) if v in rvars else None for v in variables]
        terms = {}
        exact = True
        for re_, coeff in groups.items():
            e = tuple(re_[i] if i is not None else 0 for i in idx)
            if sum(e) > order:
                exact = False
                continue
            terms[e] = canon(coeff)
        return cls._raw(variables, order, terms, field, order, exact)

    # -- queries -----------------------------------------------------------

    @property
    def ngens(self):
        return len(self.variables)

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def valuation(self):
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def homogeneous(self, d):
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def is_zero_upto(self, degree=None):
        degree = self.certified if degree is None else degree
        return all(sum(e) > degree for e in self.terms)

    def agrees(self, other, degree=None):
        """Equality of all coefficients up to the common certified order."""
        other = self._coerce(other)
        limit = min(self.certified, other.certified)
        if degree is not None:
            limit = min(limit, degree)
        return (self - other).is_zero_upto(limit)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return (self.variables == other.variables and self.order == other.order
                    and self.certified == other.certified and self.terms == other.terms)
        return NotImplemented

    __hash__ = None

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if _is_scalar(other):
            return TruncatedSeries.constant(other, self.variables, self.order, self.field)
        if isinstance(other, (RatFunc, MultiPoly)):
            r = as_ratfunc(other)
            if set(r.variables) & set(self.variables):
                return TruncatedSeries.from_ratfunc(r, self.variables, self.order, self.field)
            return TruncatedSeries.constant(canon(r), self.variables, self.order,
                                            _join(self.field, Field(r.variables)))
        return NotImplemented

    def _align(self, other):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        vs = tuple(sorted(set(self.variables) | set(other.variables)))
        return vs, _reindex(self, vs), _reindex(other, vs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        order = min(self.order, other.order)
        return TruncatedSeries(vs, order, out, _join(self.field, other.field),
                               min(self.certified, other.certified),
                               self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.variables, self.order,
                                    {e: -c for e, c in self.terms.items()},
                                    self.field, self.certified, self.exact)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other) or (isinstance(other, RatFunc) and
                                 not set(other.variables) & set(self.variables)):
            c = canon(other)
            field = self.field if _is_scalar(other) else _join(self.field, Field(other.variables))
            if not c:
                return TruncatedSeries._raw(self.variables, self.order, {}, field,
                                            self.certified, self.exact)
            return TruncatedSeries._raw(self.variables, self.order,
                                        {e: canon(x * c) for e, x in self.terms.items()},
                                        field, self.certified, self.exact)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._align(other)
        order = min(self.order, other.order)
        out = {}
        exact = self.exact and other.exact
        for ea, ca in a.items():
            da = sum(ea)
            for eb, cb in b.items():
                if da + sum(eb) > order:
                    exact = False
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                v = out.get(e, 0) + ca * cb
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return TruncatedSeries(vs, order, out, _join(self.field, other.field),
                               min(self.certified, other.certified), exact)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("series powers must be integers")
        if k < 0:
            return self.inv() ** (-k)
        result = TruncatedSeries.constant(1, self.variables, self.order, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _components(self):
        comps = [dict() for _ in range(self.order + 1)]
        for e, c in self.terms.items():
            comps[sum(e)][e] = c
        return comps

    def _from_components(self, comps, certified=None, exact=False):
        terms = {}
        for comp in comps:
            for e, c in comp.items():
                c = canon(c)
                if c:
                    terms[e] = c
        cert = self.certified if certified is None else certified
        return TruncatedSeries._raw(self.variables, self.order, terms, self.field, cert, exact)

    def inv(self):
        c0 = self.constant_term()
        if not c0:
            raise SeriesDomainError("inverse of a series with zero constant term")
        if len(self.terms) == 1:
            return self._from_components([{(0,) * self.ngens: 1 / c0}], exact=self.exact)
        a = self._components()
        inv0 = 1 / c0
        b = [{(0,) * self.ngens: inv0}]
        for n in range(1, self.order + 1):
            acc = {}
            for k in range(1, n + 1):
                if a[k] and b[n - k]:
                    _hmul(a[k], b[n - k], acc)
            b.append({e: -inv0 * c for e, c in acc.items()})
        return self._from_components(b)

    def exp(self):
        """exp of a series in the augmentation ideal (zero constant term)."""
        if self.constant_term():
            raise SeriesDomainError("exp needs a series with zero constant term")
        a = self._components()
        e = [{(0,) * self.ngens: Fraction(1)}]
        for n in range(1, self.order + 1):
            acc = {}
            for k in range(1, n + 1):
                if a[k] and e[n - k]:
                    _hmul({x: k * c for x, c in a[k].items()}, e[n - k], acc)
            e.append({x: c * Fraction(1, n) for x, c in acc.items()})
        return self._from_components(e, exact=not self.terms)

    def log(self):
        """log of a series with constant term 1."""
        if self.constant_term() != 1:
            raise SeriesDomainError("log needs a series with constant term 1")
        euler = TruncatedSeries._raw(self.variables, self.order,
                                     {x: c * sum(x) for x, c in self.terms.items() if sum(x)},
                                     self.field, self.certified, False)
        h = (euler * self.inv())._components()
        comps = [{}] + [{x: c * Fraction(1, n) for x, c in h[n].items()}
                        for n in range(1, self.order + 1)]
        return self._from_components(comps, exact=len(self.terms) == 1)

    def derive(self, var):
        """Formal partial derivative; lowers the certified order by one."""
        if var not in self.variables:
            raise ValueError(f"unknown series variable {var!r}")
        i = self.variables.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = canon(c * e[i])
        cert = self.certified if self.exact else self.certified - 1
        return TruncatedSeries._raw(self.variables, self.order, terms, self.field, cert, self.exact)

    def truncate(self, order):
        order = min(order, self.order)
        terms = {e: c for e, c in self.terms.items() if sum(e) <= order}
        exact = self.exact and len(terms) == len(self.terms)
        return TruncatedSeries._raw(self.variables, order, terms, self.field,
                                    min(self.certified, order), exact)

    def extend(self, order):
        """Raise the truncation order of an exact polynomial series."""
        if order <= self.order:
            return self.truncate(order)
        if not self.exact:
            raise ValueError("only exact polynomial series can be extended")
        return TruncatedSeries._raw(self.variables, order, dict(self.terms), self.field,
                                    order, True)

    def with_variables(self, variables):
        variables = tuple(sorted(set(variables) | set(self.variables)))
        if variables == self.variables:
            return self
        return TruncatedSeries._raw(variables, self.order, _reindex(self, variables),
                                    self.field, self.certified, self.exact)

    def to_ratfunc(self):
        """The stored polynomial part as a rational function in params and t."""
        total = RatFunc.constant(0)
        for e, c in self.terms.items():
            mono = MultiPoly.monomial(self.variables, e)
            total = total + as_ratfunc(c) * mono
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            pieces.append(_series_term(c, mono))
        out = pieces[0]
        for s in pieces[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"TruncatedSeries({str(self)!r}, order={self.order}, certified={self.certified})"


def _series_term(c, mono):
    if isinstance(c, Fraction):
        if not mono:
            return str(c)
        if c == 1:
            return mono
        if c == -1:
            return "-" + mono
        return f"{c}*{mono}"
    s = str(c)
    if isinstance(c, RatFunc) and (len(c.num.terms) > 1 or c.den.variables):
        s = f"({s})"
    return s if not mono else f"{s}*{mono}"


def _join(f, g):
    if f == g:
        return f
    return Field(f.params + g.params)


def _reindex(s, vs):
    if s.variables == vs:
        return s.terms
    pos = [vs.index(v) for v in s.variables]
    out = {}
    for e, c in s.terms.items():
        ne = [0] * len(vs)
        for i, p in enumerate(pos):
            ne[p] = e[i]
        out[tuple(ne)] = c
    return out


# -- operation dispatchers ---------------------------------------------------


def series_arith(op, a, b=None):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown series op {op!r}")


def series_exp_log(op, a):
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise ValueError(f"unknown series op {op!r}")


def derive(a, var):
    return a.derive(var)


def series_det(matrix):
    """Determinant of a small square matrix of series (Laplace expansion)."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    memo = {}

    def minor(row, cols):
        if row == n:
            return 1
        key = (row, cols)
        if key not in memo:
            total = None
            sign = 1
            for j in cols:
                rest = tuple(c for c in cols if c != j)
                entry = matrix[row][j]
                if entry:
                    term = entry * minor(row + 1, rest)
                    term = term if sign > 0 else -term
                    total = term if total is None else total + term
                sign = -sign
            memo[key] = total if total is not None else matrix[row][cols[0]] * 0
        return memo[key]

    return minor(0, tuple(range(n)))


# -- exponential polynomials -------------------------------------------------


def exp_poly_vars(n):
    return [f"x{i}" for i in range(1, n + 1)], [f"y{i}" for i in range(1, n + 1)]


@dataclass(frozen=True)
class ExpPolynomial:
    """An element of Z[X1..Xn, Y1..Yn] where ``y_i`` stands for ``exp(x_i)``."""

    n: int
    poly: MultiPoly

    def __post_init__(self):
        xs, ys = exp_poly_vars(self.n)
        allowed = set(xs) | set(ys)
        extra = [v for v in self.poly.variables if v not in allowed]
        if extra:
            raise ValueError(f"exponential polynomial uses unknown variables {extra}")
        if any(c.denominator != 1 for c in self.poly.terms.values()):
            raise ValueError("exponential polynomials need integer coefficients")

    @classmethod
    def parse(cls, text, n):
        from .grammar import parse_expr

        xs, ys = exp_poly_vars(n)
        value = parse_expr(text, variables=set(xs) | set(ys))
        if not value.is_polynomial():
            raise ValueError("exponential polynomial must be a polynomial in x_i, y_i")
        return cls(n, value.num)

    def __str__(self):
        return str(self.poly)


def _check_args(f, xs):
    if len(xs) != f.n:
        raise ValueError(f"expected {f.n} arguments, got {len(xs)}")
    for x in xs:
        if x.constant_term():
            raise SeriesDomainError("arguments of exponential polynomials need zero constant term")


def _substitution(f, xs):
    xnames, ynames = exp_poly_vars(f.n)
    mapping = dict(zip(xnames, xs))
    mapping.update(zip(ynames, (x.exp() for x in xs)))
    return mapping


def eval_exp_poly(f, xs):
    """Evaluate ``f(x, exp(x))`` on series arguments."""
    _check_args(f, xs)
    mapping = _substitution(f, xs)
    zero = TruncatedSeries.zero(xs[0].variables, min(x.order for x in xs), xs[0].field)
    return zero + f.poly.compose(mapping, zero)


@dataclass
class WitnessReport:
    holds: bool
    values: list
    jacobian: list
    jacobian_det: TruncatedSeries
    total: bool

    @property
    def vanishes(self):
        return all(v.is_zero_upto() for v in self.values)


def expalg_witness(fs, xs, total=True):
    """Check that ``xs`` is a nondegenerate zero of the system ``fs``.

    With ``total=True`` the Jacobian entries are total derivatives of
    ``x -> f_i(x, exp(x))``; ``total=False`` uses formal partials in X only.
    """
    n = len(fs)
    if len(xs) != n or any(f.n != n for f in fs):
        raise ValueError("expalg witness needs n functions of n arguments")
    for f in fs:
        _check_args(f, xs)
    mapping = _substitution(fs[0], xs)
    xnames, ynames = exp_poly_vars(n)
    zero = TruncatedSeries.zero(xs[0].variables, min(x.order for x in xs), xs[0].field)
    values = [zero + f.poly.compose(mapping, zero) for f in fs]
    jac = []
    for f in fs:
        row = []
        for j in range(n):
            entry = zero + f.poly.diff(xnames[j]).compose(mapping, zero)
            if total:
                entry = entry + f.poly.diff(ynames[j]).compose(mapping, zero) * mapping[ynames[j]]
            row.append(entry)
        jac.append(row)
    det = zero + series_det(jac)
    holds = all(v.is_zero_upto() for v in values) and bool(det.constant_term())
    return WitnessReport(holds, values, jac, det, total)


def det_by_permutations(matrix):
    """Leibniz-formula determinant; independent check for ``series_det``."""
    n = len(matrix)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = 1
        for i in range(n):
            term = matrix[i][perm[i]] * term
        total = total + (term if sign > 0 else -term)
    return total
