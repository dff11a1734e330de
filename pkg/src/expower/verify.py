"""Bounded-degree relation search and the Ax / power-Schanuel verifiers.

Transcendence degree is never claimed outright. ``relation_search`` finds
every polynomial relation of total degree <= D among truncated series that
holds up to the certified order; the transcendence degree estimate is
``k - rank`` of the Jacobian of the relations found, an upper bound for the
true value whenever the relations are genuine. Verdicts built on such an
estimate are PASS or INCONCLUSIVE, never FAIL.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, gcd

from . import fastseries
from .arith import QQ, Field, MultiPoly, RatFunc, as_ratfunc, canon, gcd_many, poly_lcm
from .arith.poly import ONE
from .linalg import (ExactMatrix, _flint, _flint_rref, _gauss_jordan, _mpq, fast_kernel,
                     fast_matrix, fast_pivot_rows, kernel_from_rref, rank)
from .expseries import TruncatedSeries
from .subspace import ldim

_MPQ = type(_mpq(0)) if _mpq is not None else None

PASS, FAIL, INCONCLUSIVE, ERROR = "PASS", "FAIL", "INCONCLUSIVE", "ERROR"
SCREEN_ORDER = 10
SPECIALIZATION_POINTS = (Fraction(13, 7), Fraction(29, 11), Fraction(-17, 5))
INTERPOLATION_POINTS = 24


class TruncationTooSmall(ValueError):
    pass


@dataclass
class TdEstimate:
    value: int
    kind: str
    stable: bool = False
    previous: int = None


@dataclass
class RelationCertificate:
    names: tuple
    degree_bound: int
    truncation: int
    field: Field
    columns: list
    kernel: list
    relations: list
    verified: bool
    exact_inputs: bool
    td: TdEstimate = None
    jacobian_rank: int = 0

    @property
    def outcome(self):
        return "relation" if self.relations else "none_up_to"

    @property
    def kernel_dimension(self):
        return len(self.kernel)

    def stability(self):
        """One-line account of the D-1 versus D comparison."""
        if self.degree_bound < 2:
            return (f"td estimate {self.td.value} at D = {self.degree_bound}; "
                    "stability needs D >= 2")
        return f"td estimate {self.td.previous} at D-1, {self.td.value} at D"

    def describe(self):
        if not self.relations:
            return f"none_up_to(D={self.degree_bound}, T={self.truncation})"
        return f"{len(self.relations)} relation(s), first {self.relations[0]}"


# -- matrix assembly ---------------------------------------------------------


def _monomials(k, D):
    cols = []
    for d in range(D + 1):
        for combo in combinations_with_replacement(range(k), d):
            e = [0] * k
            for i in combo:
                e[i] += 1
            cols.append(tuple(e))
    # degree blocks in increasing order; inside a block, descending lex
    return sorted(cols, key=lambda e: (sum(e), tuple(-x for x in e)))


def _power_products(gens, columns):
    """``g^e`` for every column exponent, each built from a parent column."""
    if gens[0].field.is_rational:
        return _fast_power_products(gens, columns)
    cache = {}
    one = TruncatedSeries.constant(1, gens[0].variables, gens[0].order, gens[0].field)
    for e in columns:
        if not any(e):
            cache[e] = one
            continue
        i = next(j for j, x in enumerate(e) if x)
        parent = e[:i] + (e[i] - 1,) + e[i + 1:]
        cache[e] = cache[parent] * gens[i]
    return cache


def _fast_power_products(gens, columns):
    fast = [fastseries.fast(g) for g in gens]
    out = {}
    for e in columns:
        if not any(e):
            out[e] = fastseries.Series.one(fast[0].order, fast[0].nvars)
            continue
        i = next(j for j, x in enumerate(e) if x)
        out[e] = out[e[:i] + (e[i] - 1,) + e[i + 1:]] * fast[i]
    return out


def _fraction(x):
    if _mpq is not None and isinstance(x, _MPQ):
        return Fraction(int(x.numerator), int(x.denominator))
    return x


class _PackedMatrix:
    """Coefficient matrix built straight from Kronecker-packed series.

    Rows are packed indices, so some rows encode no monomial and are zero;
    they do not change the kernel.
    """

    def __init__(self, series):
        s0 = series[0]
        length = (s0.order + 1) * s0._block
        zero = _flint.fmpq(0)
        flat = []
        for s in series:
            cs = s.poly.coeffs()[:length]
            flat.extend(cs)
            flat.extend([zero] * (length - len(cs)))
        self.ncols = len(series)
        self.matrix = _flint.fmpq_mat(len(series), length, flat).transpose()

    def __bool__(self):
        return True

    def kernel(self):
        reduced, pivots = _flint_rref(self.matrix)
        return kernel_from_rref(reduced, pivots, self.ncols)

    def annihilated_by(self, vectors):
        K = fast_matrix([list(col) for col in zip(*vectors)], len(vectors))
        return not any((self.matrix * K).entries())


def _coefficient_rows(products, columns, order, nvars):
    if isinstance(products[columns[0]], fastseries.FlintSeries):
        return _PackedMatrix([products[c] for c in columns])
    terms = [products[c].terms for c in columns]
    support = sorted({e for t in terms for e in t if sum(e) <= order})
    return [[_fraction(t.get(e, 0)) for t in terms] for e in support]


def _specialize(rows, params, point):
    values = {v: point for v in params}
    out = []
    for row in rows:
        out.append([x if isinstance(x, (int, Fraction)) else as_ratfunc(x).evaluate(values)
                    for x in row])
    return out


def _q_rank_rows(rows, ncols):
    return fast_pivot_rows(rows, ncols)


def _field_kernel(rows, ncols, fld):
    if fld.is_rational:
        return fast_kernel(rows, ncols)
    reduced, pivots = _gauss_jordan([[canon(x) for x in r] for r in rows], ncols)
    reduced = [tuple(canon(x) for x in r) for r in reduced]
    return kernel_from_rref(reduced, pivots, ncols)


def _annihilates(rows, v):
    for row in rows:
        total = 0
        for a, b in zip(row, v):
            if a and b:
                total = total + a * b
        if total:
            return False
    return True


def _kernel(rows, ncols, fld):
    """Kernel in reduced echelon shape.

    Over Q the independent rows are found first and only those are reduced.
    Over Q(p) the matrix is specialized at fixed rational points: full rank
    there proves full rank, otherwise the exact kernel of the rows that stay
    independent is computed and verified on the whole matrix.
    """
    if isinstance(rows, _PackedMatrix):
        return rows.kernel()
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    if fld.is_rational and _flint is not None:
        return fast_kernel(rows, ncols)
    if fld.is_rational:
        r, piv = _q_rank_rows(rows, ncols)
        if r == ncols:
            return []
        return _field_kernel([rows[i] for i in piv], ncols, fld)
    for point in SPECIALIZATION_POINTS:
        try:
            spec = _specialize(rows, fld.params, point)
        except ZeroDivisionError:
            continue
        r, piv = _q_rank_rows(spec, ncols)
        if r == ncols:
            return []
        kernel = _field_kernel([rows[i] for i in piv], ncols, fld)
        if all(_annihilates(rows, v) for v in kernel):
            return kernel
    return _field_kernel(rows, ncols, fld)


# -- relations ---------------------------------------------------------------


def _relation_poly(v, columns, names, fld):
    if fld.is_rational:
        den = 1
        for x in v:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        ints = [int(Fraction(x) * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        coeffs = [MultiPoly.constant(Fraction(x, g)) for x in ints]
    else:
        rats = [as_ratfunc(x) for x in v]
        den = ONE
        for r in rats:
            if r and r.den.variables:
                den = poly_lcm(den, r.den)
        coeffs = [r.num * den.exact_div(r.den) if r else MultiPoly.constant(0) for r in rats]
        content = gcd_many([c for c in coeffs if c])
        if content.variables:
            coeffs = [c.exact_div(content) for c in coeffs]
    total = MultiPoly.constant(0)
    for c, e in zip(coeffs, columns):
        if c:
            total = total + c * MultiPoly.monomial(names, e)
    return -total if total.leading_coefficient() < 0 else total


def evaluate_relation(rel, names, gens):
    """Substitute the generators into a relation polynomial."""
    if gens[0].field.is_rational:
        gens = [fastseries.fast(g) for g in gens]
        zero = gens[0] * 0
    else:
        zero = TruncatedSeries.zero(gens[0].variables, gens[0].order, gens[0].field)
    return zero + rel.compose(dict(zip(names, gens)), zero)


def _jacobian_rank(vectors, columns, products, k, rng):
    """Rank of (d R / d X_i)(g) for the relations given as kernel vectors.

    Random integer combinations reduce the relations to at most k rows; a
    minor counts as nonzero only if it has a nonzero certified coefficient,
    so the rank is never overestimated.
    """
    if not vectors:
        return 0
    if len(vectors) > k:
        combos = []
        for _ in range(k):
            w = [rng.randint(-9, 9) or 1 for _ in vectors]
            combos.append([sum((c * v[j] for c, v in zip(w, vectors)), Fraction(0))
                           for j in range(len(columns))])
        vectors = combos
    zero = next(iter(products.values())) * 0
    J = []
    for v in vectors:
        row = []
        for i in range(k):
            entry = zero
            for c, e in zip(v, columns):
                if c and e[i]:
                    entry = entry + products[e[:i] + (e[i] - 1,) + e[i + 1:]] * (canon(c) * e[i])
            row.append(entry)
        J.append(row)
    screen = min(zero.certified, SCREEN_ORDER)
    r = _series_rank([[e.truncate(screen) for e in row] for row in J])
    if r < min(len(J), k) and screen < zero.certified:
        r = max(r, _series_rank(J))
    return r


def _series_rank(J):
    """Fraction-free elimination over the series ring.

    Updated entries are (multiples of) minors of J, and an entry is used as
    a pivot only when a certified coefficient is nonzero, so the result is a
    lower bound for the rank that is exact unless minors vanish to high order.
    """
    rows = [list(r) for r in J]
    ncols = len(rows[0]) if rows else 0
    rank_ = 0
    for c in range(ncols):
        piv = None
        for i in range(rank_, len(rows)):
            e = rows[i][c]
            if not e.is_zero_upto():
                if piv is None or e.valuation() < rows[piv][c].valuation():
                    piv = i
        if piv is None:
            continue
        rows[rank_], rows[piv] = rows[piv], rows[rank_]
        prow = rows[rank_]
        pv = prow[c]
        for i in range(rank_ + 1, len(rows)):
            lead = rows[i][c]
            if lead.is_zero_upto():
                continue
            rows[i] = [pv * x - lead * y for x, y in zip(rows[i], prow)]
        rank_ += 1
    return rank_


def _common(gens):
    gens = list(gens)
    if not gens:
        raise ValueError("relation search needs at least one generator")
    variables = tuple(sorted(set().union(*(g.variables for g in gens))))
    params = sorted(set().union(*(g.field.params for g in gens)))
    fld = Field(tuple(params))
    order = min(g.certified for g in gens)
    return [g.with_variables(variables).truncate(order) for g in gens], variables, fld, order


def _specialize_series(s, params, point):
    values = {v: point for v in params}
    terms = {}
    for e, c in s.terms.items():
        v = c if isinstance(c, (int, Fraction)) else as_ratfunc(c).evaluate(values)
        if v:
            terms[e] = Fraction(v)
    return TruncatedSeries._raw(s.variables, s.order, terms, QQ, s.certified, s.exact)


def _specialize_vector(v, params, point):
    values = {p: point for p in params}
    return [x if isinstance(x, (int, Fraction)) else Fraction(as_ratfunc(x).evaluate(values))
            for x in v]


def _specializations(gens, fld):
    """Rational images of the generators at the fixed specialization points."""
    for point in SPECIALIZATION_POINTS:
        try:
            yield point, [_specialize_series(g, fld.params, point) for g in gens]
        except ZeroDivisionError:
            continue


def _matrix(gens, columns, order):
    products = _power_products(gens, columns)
    return products, _coefficient_rows(products, columns, order, len(gens[0].variables))


def _rank_setup(gens, columns, kernel, fld, order, exact_products):
    """Products and kernel vectors for the Jacobian rank.

    Over Q(p) both are specialized at a point where everything is defined;
    the rank there is at most the generic rank, so it stays a lower bound.
    """
    if fld.is_rational:
        return exact_products, kernel
    for point, sgens in _specializations(gens, fld):
        try:
            vecs = [_specialize_vector(v, fld.params, point) for v in kernel]
        except ZeroDivisionError:
            continue
        return _matrix(sgens, columns, order)[0], vecs
    products = exact_products or _power_products(gens, columns)
    return products, kernel


def kernel_holds(gens, columns, kernel, fld=QQ):
    """Do the kernel vectors annihilate the coefficient matrix of ``gens``?

    Used to re-check relations found at one truncation against generators
    expanded further. Over Q(p) the check is made at one specialization
    point, which can only reject relations that are genuinely false.
    """
    gens, _, gfld, order = _common(gens)
    if not kernel:
        return True
    if not gfld.is_rational:
        for point, sgens in _specializations(gens, gfld):
            try:
                vecs = [_specialize_vector(v, gfld.params, point) for v in kernel]
            except ZeroDivisionError:
                continue
            return _all_annihilate(_matrix(sgens, columns, order)[1], vecs)
        _, rows = _matrix(gens, columns, order)
        return all(_annihilates(rows, v) for v in kernel)
    return _all_annihilate(_matrix(gens, columns, order)[1], kernel)


def _all_annihilate(rows, vectors):
    if not vectors:
        return True
    if isinstance(rows, _PackedMatrix):
        return rows.annihilated_by(vectors)
    if _flint is None or not rows:
        return all(_annihilates(rows, v) for v in vectors)
    M = fast_matrix(rows, len(vectors[0]))
    K = fast_matrix([list(col) for col in zip(*vectors)], len(vectors))
    return not any((M * K).entries())


def _sample_points():
    yield from SPECIALIZATION_POINTS
    for i in range(INTERPOLATION_POINTS):
        yield Fraction(7 + 3 * i, 5 + 2 * i) + i


def _fit_rational(xs, ys, param):
    """``N/Q`` with deg N, deg Q <= (len(xs) - 1) // 2 through the points, or None."""
    d = (len(xs) - 1) // 2
    rows = [[x ** j for j in range(d + 1)] + [-y * x ** j for j in range(d + 1)]
            for x, y in zip(xs, ys)]
    kernel = fast_kernel(rows, 2 * d + 2)
    if not kernel:
        return None
    v = kernel[0]
    p = MultiPoly.var(param)
    num = sum((p ** j * v[j] for j in range(d + 1)), MultiPoly.constant(0))
    den = sum((p ** j * v[d + 1 + j] for j in range(d + 1)), MultiPoly.constant(0))
    if not den or any(den.evaluate({param: x}) == 0 for x in xs):
        return None
    return RatFunc(num, den)


def _reconstruct(samples, param):
    """Kernel over Q(param) from reduced kernels at sample points.

    Each entry is fitted on all samples but the last two and must match
    those two; the caller certifies the result exactly, so a wrong fit
    costs time, never soundness.
    """
    xs = [x for x, _ in samples]
    fit, check = xs[:-2], xs[-2:]
    out = []
    for i in range(len(samples[0][1])):
        vec = []
        for j in range(len(samples[0][1][i])):
            ys = [K[i][j] for _, K in samples]
            if all(y == ys[0] for y in ys):
                vec.append(ys[0])
                continue
            f = _fit_rational(fit, ys[:-2], param)
            if f is None:
                return None
            for x, y in zip(check, ys[-2:]):
                if f.evaluate({param: x}) != y:
                    return None
            vec.append(canon(f))
        out.append(tuple(vec))
    return out


def _param_degree(gens, params):
    """Largest parameter degree among the coefficients, None if some
    coefficient has a parameter in its denominator."""
    deg = 0
    for g in gens:
        for c in g.terms.values():
            if isinstance(c, (int, Fraction)):
                continue
            r = as_ratfunc(c)
            if r.den.variables:
                return None
            deg = max([deg] + [r.num.degree(p) for p in params if p in r.num.variables])
    return deg


def _packed_relations_vanish(relations, names, gens, fld, D):
    """Exact check of relations over Q[p] on Kronecker-packed series, or None
    when the packing does not apply."""
    pdeg = _param_degree(gens, fld.params)
    if pdeg is None or _flint is None:
        return None
    rdeg = max((r.degree(p) for r in relations for p in fld.params if p in r.variables), default=0)
    layout = fastseries.ParamPacking(gens[0].variables, fld.params, gens[0].order,
                                     D * pdeg + rdeg + 1)
    packed = [layout.pack(g) for g in gens]
    cache = {(0,) * len(gens): layout.one()}

    def product(e):
        if e not in cache:
            i = next(j for j, x in enumerate(e) if x)
            cache[e] = product(e[:i] + (e[i] - 1,) + e[i + 1:]) * packed[i]
        return cache[e]

    for r in relations:
        rvars, groups = r.split(fld.params)
        total = layout.constant(0)
        for rexp, coeff in groups.items():
            named = dict(zip(rvars, rexp))
            total = total + product(tuple(named.get(n, 0) for n in names)) * RatFunc(coeff)
        if not total.is_zero_upto():
            return False
    return True


def _interpolated_kernel(gens, columns, order, fld, names, D):
    """Kernel over Q(p) for one parameter, via kernels at rational points.

    The kernel dimension at any point is at least the generic one, so
    reconstructed relations that verify exactly and reach the smallest
    dimension seen form a complete basis. Returns ``[]`` as soon as one
    point has a trivial kernel, and None if the method does not apply.
    """
    param = fld.params[0]
    good, best = [], None
    for x in _sample_points():
        try:
            sgens = [_specialize_series(g, fld.params, x) for g in gens]
        except ZeroDivisionError:
            continue
        K = _kernel(_matrix(sgens, columns, order)[1], len(columns), QQ)
        if not K:
            return []
        shape = tuple(max(j for j, c in enumerate(v) if c) for v in K)
        if best is None or len(shape) < len(best):
            best, good = shape, []
        if shape != best:
            continue
        good.append((x, K))
        if len(good) < 3 or len(good) % 2 == 0:
            continue
        kernel = _reconstruct(good, param)
        if kernel is None:
            continue
        relations = [_relation_poly(v, columns, names, fld) for v in kernel]
        if _packed_relations_vanish(relations, names, gens, fld, D):
            return kernel
    return None


def relation_search(gens, D, names=None, seed=0):
    """All relations of total degree <= D among ``gens`` up to certified order."""
    gens, variables, fld, order = _common(gens)
    k = len(gens)
    names = tuple(names or (f"g{i}" for i in range(1, k + 1)))
    columns = _monomials(k, D)
    nrows = comb(len(variables) + order, len(variables)) if variables else 1
    if nrows < len(columns):
        raise TruncationTooSmall(
            f"{len(columns)} monomials of degree <= {D} need at least that many series "
            f"coefficients; order {order} in {len(variables)} variable(s) gives {nrows}")
    products = rows = kernel = None
    certified = False
    if fld.is_rational:
        products, rows = _matrix(gens, columns, order)
        kernel = _kernel(rows, len(columns), fld)
    else:
        # full rank at one rational point proves full rank over Q(p)
        for _, sgens in _specializations(gens, fld):
            if not _kernel(_matrix(sgens, columns, order)[1], len(columns), QQ):
                kernel = []
            break
        if kernel is None and len(fld.params) == 1 and _param_degree(gens, fld.params) is not None:
            kernel = _interpolated_kernel(gens, columns, order, fld, names, D)
            # relations from interpolation were already checked exactly
            certified = kernel is not None
        if kernel is None:
            products, rows = _matrix(gens, columns, order)
            kernel = _kernel(rows, len(columns), fld)
    relations = [_relation_poly(v, columns, names, fld) for v in kernel]
    if rows is None:
        verified = True
    elif fld.is_rational:
        verified = _all_annihilate(rows, kernel)
    else:
        verified = all(_annihilates(rows, v) for v in kernel)
    rng = random.Random(seed)
    if relations and verified and not certified:
        w = [rng.randint(1, 9) for _ in relations]
        combo = sum((c * r for c, r in zip(w, relations)), MultiPoly.constant(0))
        if fld.is_rational:
            verified = evaluate_relation(combo, names, gens).is_zero_upto(order)
        else:
            packed = _packed_relations_vanish([combo], names, gens, fld, D)
            verified = packed if packed is not None else \
                evaluate_relation(combo, names, gens).is_zero_upto(order)
    exact = all(g.exact for g in gens)
    if exact and relations:
        polys = dict(zip(names, (g.to_ratfunc() for g in gens)))
        verified = verified and all(not r.compose(polys, RatFunc.constant(0)) for r in relations)
    cert = RelationCertificate(names, D, order, fld, columns, kernel, relations, verified, exact)
    jproducts, jkernel = _rank_setup(gens, columns, kernel, fld, order, products)
    jr = _jacobian_rank(jkernel, columns, jproducts, k, rng)
    prev_vecs = _vectors_upto(jkernel, columns, D - 1)
    prev = k - _jacobian_rank(prev_vecs, columns, jproducts, k, random.Random(seed))
    kind = "certified_upper_bound" if exact else "certified_mod_truncation"
    cert.jacobian_rank = jr
    cert.td = TdEstimate(k - jr, kind, stable=D >= 2 and prev == k - jr, previous=prev)
    return cert


def _vectors_upto(kernel, columns, d):
    """Kernel vectors supported on monomials of degree <= d.

    Columns are sorted by degree and the kernel is in reduced echelon shape,
    so these vectors span the kernel of the degree <= d block.
    """
    out = []
    for v in kernel:
        free = max(j for j, x in enumerate(v) if x)
        if sum(columns[free]) <= d:
            out.append(v)
    return out


def relations_upto(cert, d):
    return [r for v, r in zip(cert.kernel, cert.relations)
            if v in _vectors_upto(cert.kernel, cert.columns, d)]


# -- reports -----------------------------------------------------------------


@dataclass
class Check:
    name: str
    verdict: str
    detail: str = ""


@dataclass
class VerifierReport:
    kind: str
    values: dict
    checks: list
    certificates: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def verdict(self):
        return combine_verdicts(c.verdict for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)


def combine_verdicts(verdicts):
    verdicts = set(verdicts)
    for v in (ERROR, FAIL, INCONCLUSIVE):
        if v in verdicts:
            return v
    return PASS


def _estimate_verdict(ok):
    return PASS if ok else INCONCLUSIVE


def _exact_verdict(ok):
    return PASS if ok else FAIL


# -- shared plumbing ---------------------------------------------------------


def _as_ratfuncs(z):
    out = []
    for x in z:
        if isinstance(x, TruncatedSeries):
            if not x.exact:
                return None
            x = x.to_ratfunc()
        out.append(as_ratfunc(x))
    return out


def _series_inputs(z, variables, fld):
    """Input tuple as series in ``variables``; exact polynomials stay exact."""
    out = []
    for x in z:
        if isinstance(x, TruncatedSeries):
            out.append(x.with_variables(variables))
        else:
            r = as_ratfunc(x)
            if r.den.variables and set(r.den.variables) & set(variables):
                raise ValueError(f"{r} is not a polynomial in the series variables")
            # a high order keeps the polynomial exact; it is cut down later
            deg = max((sum(e) for e in r.num.split(fld.params)[1]), default=0)
            out.append(TruncatedSeries.from_ratfunc(r, variables, max(deg, 1), fld))
    return out


def _rows_needed(k, D):
    return len(_monomials(k, D)) + k


def _order_for(nvars, k, D, T, step=1):
    """Order >= T giving at least (#monomials + k) coefficient rows.

    When every monomial degree of the inputs is a multiple of ``step`` only
    every step-th degree carries coefficients, so the order is scaled.
    """
    need = _rows_needed(k, D)
    base = 0
    while nvars and comb(nvars + base, nvars) < need:
        base += 1
    return max(T, step * base)


def _occurring(series):
    """Restrict to the variables that occur; returns (series, degree gcd)."""
    used = sorted({v for s in series for e in s.terms for v, x in zip(s.variables, e) if x})
    if not used:
        used = list(series[0].variables[:1])
    out = []
    step = 0
    for s in series:
        idx = [s.variables.index(v) for v in used]
        terms = {}
        for e, c in s.terms.items():
            terms[tuple(e[i] for i in idx)] = c
            step = gcd(step, sum(e))
        out.append(TruncatedSeries._raw(tuple(used), s.order, terms, s.field, s.certified,
                                        s.exact))
    return out, step or 1


def _at_order(z, order):
    """Series at ``order``; exact inputs are extended, others truncated."""
    return [s.extend(order) if s.exact else s.truncate(order) for s in z]


def _degree_gcd(s):
    g = 0
    for e in s.terms:
        g = gcd(g, sum(e))
    return g or 1


def _pair_floor(series, k, D, T):
    """Each z_i with its companions is at least a series in one variable of
    degree step gcd(z_i); ask for enough rows for that sub-tuple too."""
    return max(_order_for(1, k, D, T, _degree_gcd(s)) for s in series)


def _search(build, exact, k, D, nvars, T, names, seed, max_doublings=3, step=1, floor=0):
    """Relation search with truncation raised for exact inputs.

    ``build(order)`` returns the generators at that order. For exact inputs
    the relations found are re-checked at twice the order; a relation that
    fails there is a truncation artifact, and the search is repeated at the
    higher order.
    """
    order = max(_order_for(nvars, k, D, T, step), floor) if exact else T
    notes = []
    for _ in range(max_doublings + 1):
        gens = build(order)
        cert = relation_search(gens, D, names, seed)
        if not exact or not cert.kernel:
            return cert, order, notes
        if kernel_holds(build(2 * order), cert.columns, cert.kernel):
            return cert, order, notes
        notes.append(f"relations at T={order} fail at T={2 * order}; raising the truncation")
        order *= 2
    cert.verified = False
    notes.append("relations still not stable after raising the truncation")
    return cert, order, notes


def _exp_all(z):
    return [s.exp() for s in z]


def _jacobian_matrix_rank(z, variables, fld):
    """Rank of (d z_j / d t_i); exact for polynomial inputs, a lower bound otherwise."""
    rats = _as_ratfuncs(z)
    if rats is not None:
        jf = Field(tuple(sorted(set(fld.params) | set(variables))))
        rows = [[canon(r.diff(v)) for r in rats] for v in variables]
        return rank(ExactMatrix.from_rows(rows, jf, len(rats))), "exact"
    J = [[s.derive(v) for s in z] for v in variables]
    return _series_rank(J), "lower_bound"


def _kernel_scalars(kernel_gens):
    out = []
    for k in kernel_gens:
        r = as_ratfunc(k)
        if not r.is_constant():
            raise ValueError(f"kernel generator {r} must be a rational number")
        out.append(r)
    return out


# -- Ax ----------------------------------------------------------------------


def ax_check(z, D=4, T=16, variables=None, seed=0):
    """Ax's inequality td(z, exp z) - ldim_Q(z / Q) >= rank(d z_j / d t_i).

    The transcendence degree is a bounded-degree estimate, so the verdict
    is PASS (stable estimate, slack >= 0) or INCONCLUSIVE, never FAIL.
    """
    z = list(z)
    if not z:
        raise ValueError("ax_check needs at least one series")
    if variables is None:
        variables = sorted({v for x in z for v in (x.variables if isinstance(x, TruncatedSeries)
                                                    else as_ratfunc(x).variables)})
    variables = tuple(sorted(variables))
    series = _series_inputs(z, variables, QQ)
    if any(s.constant_term() for s in series):
        raise ValueError("ax_check needs series with zero constant term")
    n, m = len(series), len(variables)
    exact = all(s.exact for s in series)
    T = T if exact else min(T, min(s.certified for s in series))
    used, step = _occurring(series)

    def build(order):
        zs = _at_order(used, order)
        return zs + _exp_all(zs)

    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"y{i}" for i in range(1, n + 1))
    cert, order, notes = _search(build, exact, 2 * n, D, len(used[0].variables), T, names,
                                 seed, step=step, floor=_pair_floor(used, 2, D, T))

    rats = _as_ratfuncs(series)
    if rats is None:
        rats = [s.truncate(s.certified).to_ratfunc() for s in series]
        notes.append("ldim computed from the certified truncations")
    lin = ldim(QQ, rats, [RatFunc.constant(1)])
    r, rank_kind = _jacobian_matrix_rank(series, variables, QQ)
    td = cert.td.value
    slack = td - lin - r
    values = {
        "n": n, "m": m, "degree_bound": D, "truncation_used": order,
        "td_estimate": td, "td_kind": cert.td.kind, "td_previous": cert.td.previous,
        "stable": cert.td.stable, "ldim": lin, "rank": r, "rank_kind": rank_kind,
        "slack": slack, "relations": len(cert.relations),
    }
    checks = [
        Check("relations_verified", _estimate_verdict(cert.verified),
              "every relation re-evaluates to zero" if cert.verified else "unverified relation"),
        Check("td_stable", _estimate_verdict(cert.td.stable), cert.stability()),
        Check("ax_inequality", _estimate_verdict(slack >= 0),
              f"{td} - {lin} - {r} = {slack}"),
    ]
    return VerifierReport("ax", values, checks, {"relations": cert}, notes)


# -- powers ------------------------------------------------------------------


def _linear_relations(z, kernel, fld):
    """Integer (or Q(p)-) coefficient vectors a with sum a_i z_i in span(kernel)."""
    from .subspace import flatten

    if not z:
        return []
    _, M = flatten(list(z) + list(kernel), fld)
    size = len(M.rows)
    # left kernel of M: relations among z and the kernel generators
    rows = [list(col) for col in zip(*M.rows)]
    left = _kernel(rows, size, fld) if rows else [
        tuple(Fraction(int(i == j)) for i in range(size)) for j in range(size)]
    # rows of M are independent on the kernel part only modulo z; the
    # projections span the relation space of z modulo span(kernel)
    proj = [tuple(v[:len(z)]) for v in left]
    return _independent(proj, fld)


def _independent(vectors, fld):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    keep = []
    for v in vectors:
        trial = keep + [v]
        if rank(ExactMatrix.from_rows([list(w) for w in trial], fld, len(v))) == len(trial):
            keep = trial
    return keep


def _integer_vector(v):
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g else ints


def _multiplicative_relation_holds(exps, a, order):
    """prod exp(z_i)^{a_i} = 1 checked as series up to ``order``."""
    one = exps[0] * 0 + 1
    lhs, rhs = one, one
    for e, c in zip(exps, a):
        if c > 0:
            lhs = lhs * e ** c
        elif c < 0:
            rhs = rhs * e ** (-c)
    return (lhs - rhs).is_zero_upto(order)


def powers_sc_check(z, kernel_gens=(), D=4, T=16, variables=("t",), seed=0):
    """The power-Schanuel inequality
    td(exp z / Q, p) + ldim_Q(p)(z / ker) - ldim_Q(z / ker) >= 0
    in the series model, with the two linear bounds used in its proof.

    ``variables`` are the series variables; every other variable of z is a
    power (a coefficient-field parameter). Kernel generators are rational.
    """
    variables = tuple(sorted(variables))
    rats = _as_ratfuncs(z)
    if rats is None:
        raise ValueError("powers_sc_check needs polynomial inputs")
    params = tuple(sorted({v for r in rats for v in r.variables} - set(variables)))
    fld = Field(params) if params else QQ
    ker = _kernel_scalars(kernel_gens)
    series = _series_inputs(rats, variables, fld)
    if any(s.constant_term() for s in series):
        raise ValueError("powers_sc_check needs series with zero constant term")
    n, m = len(series), len(variables)
    used, step = _occurring(series)
    mu = len(used[0].variables)

    def build(order):
        return _exp_all(_at_order(used, order))

    names = tuple(f"y{i}" for i in range(1, n + 1))
    cert, order, notes = _search(build, True, n, D, mu, T, names, seed, step=step)
    zcert, _, znotes = _search(lambda o: _at_order(used, o), True, n, D, mu, T,
                               tuple(f"x{i}" for i in range(1, n + 1)), seed, step=step)
    notes += znotes

    ld_qp = ldim(fld, rats, ker)
    ld_q = ldim(QQ, rats, ker)
    td = cert.td.value
    value = td + ld_qp - ld_q

    # Q-linear relations of z give multiplicative relations of exp z
    qrels = [_integer_vector(v) for v in _linear_relations(rats, ker, QQ)]
    exps = build(order)
    mult_ok = all(_multiplicative_relation_holds(exps, a, order) for a in qrels
                  if not _kernel_offset(rats, ker, a))
    linear_bound = n - len(qrels)
    # Q(p)-linear relations of z
    prels = _linear_relations(rats, ker, fld)
    power_bound = n - len(prels)

    values = {
        "n": n, "m": m, "powers": ",".join(params) or "-", "degree_bound": D,
        "truncation_used": order, "td_estimate": td, "td_kind": cert.td.kind,
        "td_previous": cert.td.previous, "stable": cert.td.stable,
        "ldim_Qp": ld_qp, "ldim_Q": ld_q, "value": value,
        "linear.bound": linear_bound, "linear.relations": len(qrels),
        "power.td_z": zcert.td.value, "power.bound": power_bound,
    }
    checks = [
        Check("linear.identity", _exact_verdict(linear_bound == ld_q and mult_ok),
              f"n - #Q-relations = {linear_bound}, ldim_Q = {ld_q}; relations lift to exp"),
        Check("linear.estimate", _estimate_verdict(td <= ld_q),
              f"td_est(exp z) = {td} <= {ld_q}"),
        Check("power.identity", _exact_verdict(power_bound == ld_qp),
              f"n - #Q(p)-relations = {power_bound}, ldim_Q(p) = {ld_qp}"),
        Check("power.bound", (_exact_verdict if zcert.verified and zcert.td.kind ==
                           "certified_upper_bound" else _estimate_verdict)(zcert.td.value <= ld_qp),
              f"td(z / Q(p)) <= {zcert.td.value} <= {ld_qp}"),
        Check("relations_verified", _estimate_verdict(cert.verified)),
        Check("td_stable", _estimate_verdict(cert.td.stable), cert.stability()),
        Check("powers_inequality", _estimate_verdict(value >= 0),
              f"{td} + {ld_qp} - {ld_q} = {value}"),
    ]
    notes.append("the first inequality of the proof is checked only through the assembled value")
    return VerifierReport("powers", values, checks, {"relations": cert, "z_relations": zcert},
                          notes)


def _kernel_offset(rats, ker, a):
    """Nonzero when sum a_i z_i is a nonzero element of span(ker)."""
    total = sum((c * r for c, r in zip(a, rats)), RatFunc.constant(0))
    return bool(total)


def etpower_check(x, kernel_gens=(), D=4, T=16, variables=("t",), p="p", seed=0):
    """The reduction taking z = (x, p x), chained to the descent-chain inequality."""
    from .chain import power_inequality_check

    x = _as_ratfuncs(x)
    if x is None:
        raise ValueError("etpower_check needs polynomial inputs")
    if any(p in r.variables for r in x):
        raise ValueError(f"x must not involve the power {p!r}")
    ker = _kernel_scalars(kernel_gens)
    pv = RatFunc.var(p)
    px = [pv * r for r in x]
    base = powers_sc_check(x + px, ker, D, T, variables, seed)
    qp = Field((p,))
    n = len(x)
    ldx = ldim(QQ, x, ker)
    ld_all = ldim(QQ, x + px, ker)
    ld_px = ldim(QQ, px, x + ker)
    qp_x = ldim(qp, x, ker)
    qp_all = ldim(qp, x + px, ker)
    chain = power_inequality_check(x, ker, p)
    td = base.values["td_estimate"]
    values = dict(base.values)
    values.update({
        "ldim_Q(x/ker)": ldx, "ldim_Q(x,px/ker)": ld_all, "ldim_Q(px/x,ker)": ld_px,
        "ldim_Qp(x/ker)": qp_x, "ldim_Qp(x,px/ker)": qp_all,
        "bound": n + ld_px - qp_x,
    })
    values.update({f"chain.{k}": v for k, v in chain.values().items()})
    values["chain.dims"] = ",".join(map(str, chain.certificate.dims))
    checks = list(base.checks) + [
        Check("hypothesis", _estimate_verdict(ldx == n),
              f"exp(x) multiplicatively independent iff ldim_Q(x/ker) = n: {ldx} vs {n}"),
        Check("addition_identity", _exact_verdict(ld_all == ldx + ld_px),
              f"{ld_all} = {ldx} + {ld_px}"),
        Check("qp_identity", _exact_verdict(qp_all == qp_x), f"{qp_all} = {qp_x}"),
        Check("power_inequality", _exact_verdict(chain.holds),
              "; ".join(chain.failures) or f"{chain.final[0]} >= {chain.final[1]}"),
        Check("etpower_bound", _estimate_verdict(td >= n + ld_px - qp_x >= n),
              f"td_est {td} >= {n + ld_px - qp_x} >= {n}"),
    ]
    return VerifierReport("etpower", values, checks, base.certificates,
                          base.notes + [f"z = (x, {p} x)"])
