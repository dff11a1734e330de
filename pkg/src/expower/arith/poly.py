"""Sparse multivariate polynomials over Q.

Variables are kept in sorted order and unused variables are dropped after
every operation, so two polynomials are equal iff their ``variables`` and
``terms`` are equal. Monomials are compared in graded lexicographic order
(total degree first, then exponent tuples in variable order).
"""

from fractions import Fraction
from functools import reduce

from .rational import as_rational


def grlex_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables=(), terms=None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {variables}")
        order = sorted(range(len(variables)), key=lambda i: variables[i])
        svars = tuple(variables[i] for i in order)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise ValueError(f"exponent vector {exps} does not match {variables}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = as_rational(c)
            if c:
                key = tuple(exps[i] for i in order)
                clean[key] = clean.get(key, 0) + c
                if not clean[key]:
                    del clean[key]
        self._set(svars, clean)

    def _set(self, variables, terms):
        n = len(variables)
        if not terms:
            variables = ()
        elif n:
            used = [i for i in range(n) if any(e[i] for e in terms)]
            if len(used) < n:
                variables = tuple(variables[i] for i in used)
                terms = {tuple(e[i] for i in used): c for e, c in terms.items()}
        self.variables = variables
        self.terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, variables, terms):
        obj = cls.__new__(cls)
        obj._set(variables, terms)
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c):
        c = as_rational(c)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def var(cls, name):
        return cls._raw((name,), {(1,): Fraction(1)})

    @classmethod
    def monomial(cls, variables, exps, coeff=1):
        return cls(variables, {tuple(exps): coeff})

    # -- basic queries -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.variables

    def constant_value(self):
        if self.variables:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var):
        if var not in self.variables:
            return 0 if self.terms else -1
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def leading_term(self):
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    def leading_coefficient(self):
        if not self.terms:
            return Fraction(0)
        return self.leading_term()[1]

    def monic(self):
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self._raw(self.variables, {e: c / lc for e, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return not self.variables and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not self.variables:
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def _align(self, other):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        vs = tuple(sorted(set(self.variables) | set(other.variables)))
        return vs, _reindex(self, vs), _reindex(other, vs)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        vs, a, b = self._align(other)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._raw(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return self._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        if not other.variables:
            return self * other.constant_value()
        if not self.variables:
            return other * self.constant_value()
        vs, a, b = self._align(other)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return self._raw(vs, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("MultiPoly powers must be non-negative integers")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def divmod(self, other):
        """Multivariate division by one polynomial under graded-lex order."""
        other = _coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        vs, a, b = self._align(other)
        glead = max(b, key=grlex_key)
        gc = b[glead]
        rem = dict(a)
        quo = {}
        out_rem = {}
        while rem:
            lead = max(rem, key=grlex_key)
            c = rem[lead]
            if all(x >= y for x, y in zip(lead, glead)):
                m = tuple(x - y for x, y in zip(lead, glead))
                qc = c / gc
                quo[m] = quo.get(m, 0) + qc
                for e, bc in b.items():
                    e2 = tuple(x + y for x, y in zip(m, e))
                    v = rem.get(e2, 0) - qc * bc
                    if v:
                        rem[e2] = v
                    else:
                        rem.pop(e2, None)
            else:
                out_rem[lead] = c
                del rem[lead]
        return self._raw(vs, {e: c for e, c in quo.items() if c}), self._raw(vs, out_rem)

    def exact_div(self, other):
        """Return ``self / other``; raise ValueError if the division is not exact."""
        other = _coerce(other)
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        if not self.terms:
            return ZERO
        if not other.variables:
            return self * (1 / other.constant_value())
        if len(other.terms) == 1:
            (ge, gc), = other.terms.items()
            vs, a, _ = self._align(other)
            pos = [vs.index(v) for v in other.variables]
            shift = [0] * len(vs)
            for i, p in enumerate(pos):
                shift[p] = ge[i]
            out = {}
            for e, c in a.items():
                ne = tuple(x - s for x, s in zip(e, shift))
                if any(x < 0 for x in ne):
                    raise ValueError("inexact polynomial division")
                out[ne] = c / gc
            return self._raw(vs, out)
        q, r = self.divmod(other)
        if r.terms:
            raise ValueError("inexact polynomial division")
        return q

    # -- calculus and substitution ----------------------------------------

    def diff(self, var):
        if var not in self.variables:
            return ZERO
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return self._raw(self.variables, out)

    def coefficients_in(self, var):
        """Split into ``{degree: coefficient polynomial}`` with respect to ``var``."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {d: self._raw(rest, t) for d, t in parts.items()}

    def split(self, keep):
        """Group terms by the exponents of variables outside ``keep``.

        Returns ``(residual_vars, {residual_exps: poly in keep-variables})``.
        """
        keep = set(keep)
        kidx = [i for i, v in enumerate(self.variables) if v in keep]
        ridx = [i for i, v in enumerate(self.variables) if v not in keep]
        kvars = tuple(self.variables[i] for i in kidx)
        rvars = tuple(self.variables[i] for i in ridx)
        groups = {}
        for e, c in self.terms.items():
            groups.setdefault(tuple(e[i] for i in ridx), {})[tuple(e[i] for i in kidx)] = c
        return rvars, {r: self._raw(kvars, t) for r, t in groups.items()}

    def evaluate(self, point):
        """Substitute values for some or all variables.

        Returns a Fraction when every variable is assigned, otherwise a
        MultiPoly in the remaining variables.
        """
        point = {v: as_rational(x) for v, x in point.items() if v in self.variables}
        if not point:
            return self.constant_value() if not self.variables else self
        free = tuple(v for v in self.variables if v not in point)
        fidx = [i for i, v in enumerate(self.variables) if v not in point]
        vals = [(i, point[v]) for i, v in enumerate(self.variables) if v in point]
        out = {}
        for e, c in self.terms.items():
            for i, x in vals:
                if e[i]:
                    c = c * x ** e[i]
            if c:
                key = tuple(e[i] for i in fidx)
                out[key] = out.get(key, 0) + c
        result = self._raw(free, {e: c for e, c in out.items() if c})
        return result.constant_value() if not free else result

    def compose(self, mapping, zero=0):
        """Substitute ring elements (polynomials, rational functions, series).

        Variables missing from ``mapping`` are substituted by themselves.
        """
        values = [mapping[v] if v in mapping else MultiPoly.var(v) for v in self.variables]
        powers = [{0: 1, 1: x} for x in values]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2) * power(i, k - k // 2)
            return cache[k]

        total = zero
        for e, c in sorted(self.terms.items(), key=lambda t: grlex_key(t[0])):
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            total = total + (c if term is None else term * c)
        return total

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            pieces.append(_term_str(self.terms[e], _monomial_str(self.variables, e)))
        out = pieces[0]
        for s in pieces[1:]:
            out += " - " + s[1:] if s.startswith("-") else " + " + s
        return out

    def __repr__(self):
        return f"MultiPoly({str(self)!r})"


def _monomial_str(variables, exps):
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(variables, exps) if k)


def _term_str(c, mono):
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def _reindex(f, vs):
    if f.variables == vs:
        return f.terms
    pos = [vs.index(v) for v in f.variables]
    n = len(vs)
    out = {}
    for e, c in f.terms.items():
        ne = [0] * n
        for i, p in enumerate(pos):
            ne[p] = e[i]
        out[tuple(ne)] = c
    return out


def _coerce(x):
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.constant(x)
    return NotImplemented


ZERO = MultiPoly._raw((), {})
ONE = MultiPoly._raw((), {(): Fraction(1)})


def as_poly(x):
    p = _coerce(x)
    if p is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a polynomial")
    return p


def poly_arith(op, f, g=None):
    """Dispatch ``add, mul, neg, eval`` on polynomials.

    For ``eval``, ``g`` is a mapping from variable names to rationals.
    """
    f = as_poly(f)
    if op == "neg":
        return -f
    if op == "eval":
        return f.evaluate(g)
    g = as_poly(g)
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown polynomial op {op!r}")


# -- gcd ---------------------------------------------------------------------


def poly_gcd(f, g):
    """Greatest common divisor, monic under graded-lex; gcd(0, 0) = 0."""
    f, g = as_poly(f), as_poly(g)
    if not f and not g:
        return ZERO
    return _gcd(f, g).monic()


def poly_lcm(f, g):
    f, g = as_poly(f), as_poly(g)
    if not f or not g:
        return ZERO
    return (f * g.exact_div(poly_gcd(f, g))).monic()


def _gcd(f, g):
    if not f.terms:
        return g
    if not g.terms:
        return f
    if not f.variables or not g.variables:
        return ONE
    if len(f.terms) == 1:
        return _monomial_gcd(f, g)
    if len(g.terms) == 1:
        return _monomial_gcd(g, f)
    fv, gv = set(f.variables), set(g.variables)
    if not fv & gv:
        return ONE
    for v in f.variables:
        if v not in gv:
            return _gcd(_content(f, v), g)
    for v in g.variables:
        if v not in fv:
            return _gcd(f, _content(g, v))
    if len(f.variables) == 1:
        return _univariate_gcd(f, g)
    x = min(f.variables, key=lambda v: max(f.degree(v), g.degree(v)))
    cf, cg = _content(f, x), _content(g, x)
    c = _gcd(cf, cg)
    a, b = f.exact_div(cf), g.exact_div(cg)
    if a.degree(x) < b.degree(x):
        a, b = b, a
    while True:
        r = _prem(a, b, x)
        if not r.terms:
            return c * b.monic()
        if r.degree(x) == 0:
            return c
        a, b = b, _primitive(r, x)


def _monomial_gcd(m, f):
    (me, _), = m.terms.items()
    exps = []
    for i, v in enumerate(m.variables):
        if v not in f.variables:
            exps.append(0)
            continue
        j = f.variables.index(v)
        exps.append(min(me[i], min(e[j] for e in f.terms)))
    return MultiPoly._raw(m.variables, {tuple(exps): Fraction(1)})


def _content(f, x):
    coeffs = sorted(f.coefficients_in(x).values(), key=lambda p: len(p.terms))
    acc = coeffs[0]
    for c in coeffs[1:]:
        if not acc.variables:
            return ONE
        acc = _gcd(acc, c)
    return acc.monic()


def _primitive(r, x):
    return r.exact_div(_content(r, x)).monic()


def _prem(a, b, x):
    db = b.degree(x)
    cb = b.coefficients_in(x)
    lcb = cb[db]
    xv = MultiPoly.var(x)
    r = a
    while r.terms and r.degree(x) >= db:
        dr = r.degree(x)
        lcr = r.coefficients_in(x)[dr]
        r = r * lcb - lcr * xv ** (dr - db) * b
    return r


def _dense(f):
    n = f.total_degree()
    out = [Fraction(0)] * (n + 1)
    for (e,), c in f.terms.items():
        out[e] = c
    return out


def _dense_rem(a, b):
    a = list(a)
    inv = 1 / b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        q = a[-1] * inv
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        while a and not a[-1]:
            a.pop()
    while a and not a[-1]:
        a.pop()
    return a


def _univariate_gcd(f, g):
    x = f.variables[0]
    a, b = _dense(f), _dense(g)
    while b:
        a, b = b, _dense_rem(a, b)
    return MultiPoly._raw((x,), {(i,): c for i, c in enumerate(a) if c}).monic()


def gcd_many(polys):
    return reduce(poly_gcd, polys, ZERO)
