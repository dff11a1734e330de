"""Finite-dimensional K-subspaces of Q(p, q) for K = Q or K = Q(p).

A finite set of field elements is coordinatized by clearing one common
denominator and reading off the coefficients of the residual monomials (the
variables that are not parameters of K). Multiplication by a fixed nonzero
field element is K-linear and injective, so every span, rank and
intersection computed on the coordinates is the one in the field.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import QQ, Field, MultiPoly, RatFunc, as_ratfunc, canon, grlex_key, poly_lcm
from .arith.poly import ONE
from .linalg import ExactMatrix, _gauss_jordan, rank


def _field(field):
    return Field.parse(field) if isinstance(field, str) else field


@dataclass(frozen=True)
class FlatteningContext:
    coefficient_field: Field
    residual_variables: tuple
    monomial_support: tuple
    denominator: MultiPoly

    def reconstruct(self, coords):
        total = RatFunc.constant(0)
        for c, e in zip(coords, self.monomial_support):
            if c:
                total = total + as_ratfunc(c) * MultiPoly.monomial(self.residual_variables, e)
        return total / self.denominator

    @property
    def size(self):
        return len(self.monomial_support)


def _coordinates(elements, field):
    rats = [as_ratfunc(x) for x in elements]
    den = ONE
    for r in rats:
        if r.den.variables:
            den = poly_lcm(den, r.den)
    params = set(field.params)
    residual = sorted({v for r in rats for v in r.variables if v not in params}
                      | {v for v in den.variables if v not in params})
    rows = []
    for r in rats:
        n = r.num * (den.exact_div(r.den) if r.den.variables else den)
        rvars, groups = n.split(field.params)
        idx = [rvars.index(v) if v in rvars else None for v in residual]
        rows.append({tuple(e[i] if i is not None else 0 for i in idx): c
                     for e, c in groups.items()})
    return tuple(residual), den, rows


def flatten(elements, field=QQ):
    """Coordinatize ``elements`` over the field; returns ``(context, matrix)``."""
    field = _field(field)
    residual, den, rows = _coordinates(elements, field)
    support = tuple(sorted({e for row in rows for e in row}, key=grlex_key))
    ctx = FlatteningContext(field, residual, support, den)
    matrix = ExactMatrix.from_rows([[canon(row.get(e, 0)) for e in support] for row in rows],
                                   field, len(support))
    return ctx, matrix


def _echelon(rows, ncols, field):
    if field.is_rational:
        from .linalg import rref_pivots

        reduced, _ = rref_pivots(ExactMatrix(tuple(map(tuple, rows)), ncols, field))
        return [tuple(r) for r in reduced]
    reduced, _ = _gauss_jordan(rows, ncols)
    return [tuple(canon(x) for x in r) for r in reduced]


class SubspaceBasis:
    """Echelonized K-basis of a subspace, in a flattening context."""

    def __init__(self, context, vectors):
        self.context = context
        self.vectors = tuple(vectors)

    @classmethod
    def span(cls, elements, field=QQ):
        ctx, m = flatten(list(elements), field)
        return cls(ctx, _echelon(m.rows, m.ncols, ctx.coefficient_field))

    @property
    def field(self):
        return self.context.coefficient_field

    @property
    def dim(self):
        return len(self.vectors)

    def elements(self):
        return [self.context.reconstruct(v) for v in self.vectors]

    def scale(self, c):
        """The subspace ``c * A`` for a nonzero field element ``c``."""
        if not c:
            raise ValueError("scaling a subspace by zero")
        return SubspaceBasis.span([e * c for e in self.elements()], self.field)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.context == other.context and self.vectors == other.vectors

    def __hash__(self):
        return hash((self.context, self.vectors))

    def __repr__(self):
        gens = ", ".join(str(e) for e in self.elements())
        return f"span_{self.field}{{{gens}}}"


def span(elements, field=QQ):
    return SubspaceBasis.span(elements, field)


def _same_field(A, B):
    if A.field != B.field:
        raise ValueError(f"subspaces over different fields {A.field} and {B.field}")
    return A.field


def intersect(A, B):
    """``A ∩ B`` by the Zassenhaus block matrix ``[[A, A], [B, 0]]``."""
    field = _same_field(A, B)
    ea, eb = A.elements(), B.elements()
    if not ea or not eb:
        return SubspaceBasis.span([], field)
    ctx, m = flatten(ea + eb, field)
    n = m.ncols
    zero = [Fraction(0)] * n
    block = [list(r) + list(r) for r in m.rows[:len(ea)]]
    block += [list(r) + zero for r in m.rows[len(ea):]]
    reduced = _echelon(block, 2 * n, field)
    inter = [r[n:] for r in reduced if not any(r[:n])]
    return SubspaceBasis.span([ctx.reconstruct(v) for v in inter], field)


def span_ops(op, A, B):
    """``sum`` and ``equal`` of two subspaces, ``member`` of an element in ``A``."""
    if op == "sum":
        _same_field(A, B)
        return SubspaceBasis.span(A.elements() + B.elements(), A.field)
    if op == "member":
        return ldim(A.field, [B], A.elements()) == 0
    if op == "equal":
        _same_field(A, B)
        if A.dim != B.dim:
            return False
        both = SubspaceBasis.span(A.elements() + B.elements(), A.field)
        return both.dim == A.dim
    raise ValueError(f"unknown span op {op!r}")


def ldim(field, X, Y=(), kernel=()):
    """``ldim_K(X/Y)``; ``kernel`` lists declared generators added to ``Y``."""
    field = _field(field)
    Y = list(Y) + list(kernel)
    X = list(X)
    if not X:
        return 0
    ctx, m = flatten(Y + X, field)
    full = rank(m)
    if not Y:
        return full
    base = rank(ExactMatrix(m.rows[:len(Y)], m.ncols, field))
    return full - base


# -- linear disjointness ----------------------------------------------------


@dataclass
class DisjointnessResult:
    verdict: str
    tuple: tuple = ()
    ldims: tuple = ()


def _variables(gens):
    return {v for g in gens for v in as_ratfunc(g).variables}


def _is_plain(g):
    g = as_ratfunc(g)
    return g.is_constant() or (g.is_polynomial() and len(g.variables) == 1
                               and g.num == MultiPoly.var(g.variables[0]))


def _sample_tuple(rng, gens, size):
    out = [RatFunc.constant(1)]
    for _ in range(size - 1):
        g = RatFunc.constant(rng.randint(1, 3))
        for h in gens:
            k = rng.randint(-1, 2)
            if k:
                g = g * as_ratfunc(h) ** k
        out.append(g)
    return out


def disjointness_check(K_gens, L_gens, samples=20, seed=0):
    """Decide ``K ⊥_Q L`` by the disjoint-variables criterion or refute it
    by a sampled L-tuple that is Q-independent but K-dependent.

    Sampled refutation is exact only when K is generated by variables (so
    ``K = Q(vars)``); otherwise the result is inconclusive.
    """
    kvars = _variables(K_gens)
    lvars = _variables(L_gens)
    if not kvars & lvars:
        return DisjointnessResult("disjoint_by_criterion")
    if not all(_is_plain(g) for g in K_gens):
        return DisjointnessResult("inconclusive")
    K = Field(tuple(kvars))
    rng = random.Random(seed)
    candidates = [[RatFunc.constant(1), as_ratfunc(g)] for g in L_gens]
    candidates += [_sample_tuple(rng, L_gens, rng.randint(2, 4)) for _ in range(samples)]
    for tup in candidates:
        dk, de = ldim(K, tup), ldim(QQ, tup)
        if dk != de:
            return DisjointnessResult("counterexample", tuple(tup), (dk, de))
    return DisjointnessResult("inconclusive")


def stabilized_sample(base, grow, measures, patience=2, max_rounds=10):
    """Enlarge a finite sample of a field until every measure stabilizes.

    ``grow(r)`` returns the elements added in round ``r``; ``measures`` are
    functions of the current sample. Returns ``(sample, values)`` once the
    values repeat for ``patience`` consecutive rounds.
    """
    sample = list(base)
    values = tuple(f(sample) for f in measures)
    steady = 0
    for r in range(max_rounds):
        sample = sample + list(grow(r))
        new = tuple(f(sample) for f in measures)
        steady = steady + 1 if new == values else 0
        values = new
        if steady >= patience:
            break
    return sample, values
