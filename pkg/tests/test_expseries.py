import random
from fractions import Fraction

import pytest

from expower.arith import Field, RatFunc
from expower.generators import series_poly
from expower.grammar import SeriesContext, parse_expr
from expower.expseries import (ExpPolynomial, SeriesDomainError, TruncatedSeries, det_by_permutations,
                            derive, eval_exp_poly, expalg_witness, series_arith, series_det,
                            series_exp_log)

VARS = ("s", "t")


def S(text, order=8, variables=VARS, field=None):
    ctx = SeriesContext(tuple(sorted(variables)), order, field or Field())
    v = parse_expr(text, series=ctx)
    if isinstance(v, TruncatedSeries):
        return v
    return TruncatedSeries.from_ratfunc(v, ctx.variables, order, ctx.field)


def test_arith_examples():
    assert series_arith("mul", S("1 + t"), S("1 - t")).agrees(S("1 - t^2"))
    prod = S("t^5", 8) * S("t^5", 8)
    assert not prod.terms and prod.certified == 8
    geo = series_arith("inv", S("1 - t", 6, ("t",)))
    assert geo.terms == {(k,): 1 for k in range(7)}
    with pytest.raises(SeriesDomainError):
        S("t").inv()


def test_exp_log_examples():
    e = series_exp_log("exp", S("t", 4, ("t",)))
    assert e.terms == {(0,): 1, (1,): 1, (2,): Fraction(1, 2), (3,): Fraction(1, 6),
                       (4,): Fraction(1, 24)}
    assert series_exp_log("log", e).agrees(S("t", 4, ("t",)))
    with pytest.raises(SeriesDomainError):
        S("1 + t").exp()
    with pytest.raises(SeriesDomainError):
        S("2 + t").log()


def test_grammar_series_literals():
    a = S("exp(t + t^2)")
    assert a.agrees(S("exp(t)") * S("exp(t^2)"))
    assert S("log(1 + t)").agrees(-S("log(1/(1 + t))"))


def test_derive_examples():
    assert derive(S("t^2*s"), "t").agrees(S("2*t*s"))
    lhs = derive(S("exp(t^2)"), "t")
    assert lhs.agrees(S("2*t") * S("exp(t^2)"))
    assert lhs.certified == 7
    assert not derive(S("t"), "s").terms
    with pytest.raises(ValueError):
        derive(S("t"), "u")


def test_derive_of_exact_keeps_certified():
    assert derive(S("t^3 + s"), "t").certified == 8


def test_parameter_coefficients():
    z = S("p*t", 4, ("t",), Field.of("p"))
    e = z.exp()
    assert e.coefficient((2,)) == RatFunc.var("p") ** 2 / 2
    assert derive(e, "t").agrees(e * RatFunc.var("p"))


def _random_ideal(rng, order=8):
    base = TruncatedSeries.from_ratfunc(RatFunc(series_poly(rng, VARS, 3)), VARS, order)
    if rng.random() < 0.4:
        other = TruncatedSeries.from_ratfunc(RatFunc(series_poly(rng, VARS, 2)), VARS, order)
        base = base + other * other.exp()
    return base


def test_exponential_field_axioms_200():
    rng = random.Random("series")
    for _ in range(200):
        a, b = _random_ideal(rng), _random_ideal(rng)
        ea = a.exp()
        assert (a + b).exp().agrees(ea * b.exp())
        assert ea.log().agrees(a)
        assert (1 + a).log().exp().agrees(1 + a)
        for v in VARS:
            assert derive(a * b, v).agrees(derive(a, v) * b + a * derive(b, v))
            assert derive(ea, v).agrees(derive(a, v) * ea)
        assert derive(derive(a, "s"), "t").agrees(derive(derive(a, "t"), "s"))


def test_kernel_of_exp_is_trivial():
    rng = random.Random(4)
    for _ in range(50):
        a = _random_ideal(rng)
        e = a.exp()
        assert e.certified == 8
        assert (e - 1).is_zero_upto() == a.is_zero_upto()


def test_series_det_matches_leibniz():
    rng = random.Random(2)
    for n in (1, 2, 3):
        M = [[_random_ideal(rng, 5) + rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        assert series_det(M).agrees(det_by_permutations(M))


def X(text, n):
    return ExpPolynomial.parse(text, n)


def test_eval_exp_poly_examples():
    t = S("t")
    v = eval_exp_poly(X("y1 - 1 - x1", 1), [t])
    assert v.agrees(t.exp() - 1 - t)
    assert v.coefficient((0, 2)) == Fraction(1, 2)
    zero = TruncatedSeries.zero(VARS, 8)
    assert eval_exp_poly(X("y1", 1), [zero]).agrees(TruncatedSeries.constant(1, VARS, 8))
    s = S("s")
    assert eval_exp_poly(X("y1*y2 - y3", 3), [t, s, t + s]).is_zero_upto()


def test_exp_poly_rejects_bad_input():
    with pytest.raises(ValueError):
        X("x1/2", 1)
    with pytest.raises(SeriesDomainError):
        eval_exp_poly(X("y1", 1), [S("1 + t")])


def test_expalg_witness_examples():
    zero = TruncatedSeries.zero(("t",), 8)
    w = expalg_witness([X("y1 - 1", 1)], [zero])
    assert w.holds and w.jacobian_det.constant_term() == 1
    w = expalg_witness([X("y1 - 1 - x1", 1)], [zero])
    assert w.vanishes and not w.holds and w.jacobian_det.constant_term() == 0
    w = expalg_witness([X("x1", 2), X("x2 - y1 + 1", 2)], [zero, zero])
    assert w.holds
    assert [[e.constant_term() for e in row] for row in w.jacobian] == [[1, 0], [-1, 1]]
    assert w.jacobian_det.constant_term() == 1


def test_formal_partial_variant_differs():
    zero = TruncatedSeries.zero(("t",), 8)
    w = expalg_witness([X("y1 - 1", 1)], [zero], total=False)
    assert not w.holds
