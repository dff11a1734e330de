import random
from fractions import Fraction

import pytest

from expower import fastseries
from expower.arith import Field, MultiPoly, RatFunc
from expower.generators import ax_instance, rng_for, series_poly
from expower.grammar import SeriesContext, parse_expr
from expower.linalg import fast_kernel, ff_rref_kernel
from expower.expseries import TruncatedSeries
from expower.verify import (FAIL, INCONCLUSIVE, PASS, TruncationTooSmall, ax_check,
                            etpower_check, kernel_holds, powers_sc_check, relation_search)

QP = Field(("p",))


def S(text, order=16, variables=("t",), field=None):
    field = field or Field()
    ctx = SeriesContext(tuple(sorted(variables)), order, field)
    v = parse_expr(text, series=ctx)
    if isinstance(v, TruncatedSeries):
        return v
    return TruncatedSeries.from_ratfunc(v, ctx.variables, order, field)


def P(text):
    return parse_expr(text)


def naive_value(rel, names, gens):
    """Evaluate a relation with plain Fraction series arithmetic."""
    zero = TruncatedSeries.zero(gens[0].variables, gens[0].order, gens[0].field)
    total = zero
    for e, c in rel.terms.items():
        term = zero + c
        for v, k in zip(rel.variables, e):
            term = term * gens[names.index(v)] ** k if v in names else term * RatFunc.var(v) ** k
        total = total + term
    return total


# -- relation search ---------------------------------------------------------


def test_relation_search_examples():
    cert = relation_search([S("t"), S("t^2")], 2, names=("X1", "X2"))
    assert cert.kernel_dimension == 1
    assert cert.relations[0] == MultiPoly.var("X1") ** 2 - MultiPoly.var("X2")
    assert cert.verified and cert.td.kind == "certified_upper_bound"

    cert = relation_search([S("exp(t)"), S("exp(-t)")], 2, names=("X1", "X2"))
    assert cert.kernel_dimension == 1
    assert cert.relations[0] == MultiPoly.var("X1") * MultiPoly.var("X2") - 1
    assert cert.td.kind == "certified_mod_truncation"

    cert = relation_search([S("t", 12), S("exp(t)", 12)], 3)
    assert cert.outcome == "none_up_to" and cert.describe() == "none_up_to(D=3, T=12)"
    again = relation_search([S("t", 16), S("exp(t)", 16)], 4)
    assert again.outcome == "none_up_to" and again.td.value == 2 and again.td.stable


def test_relation_search_refuses_small_truncation():
    with pytest.raises(TruncationTooSmall):
        relation_search([S("t", 5), S("t^2", 5), S("exp(t)", 5)], 4)


def test_relation_search_over_powers_field():
    cert = relation_search([S("exp(t)", field=QP), S("exp(p*t)", field=QP)], 4)
    assert cert.outcome == "none_up_to" and cert.td.value == 2
    cert = relation_search([S("t", field=QP), S("p*t", field=QP)], 2, names=("X1", "X2"))
    X1, X2, p = (MultiPoly.var(v) for v in ("X1", "X2", "p"))
    assert cert.relations[0] == p * X1 - X2
    assert cert.td.value == 1


def test_interpolated_kernel_matches_exact_elimination():
    from expower import verify
    gens = [S(x, 10, field=QP) for x in ("t", "p*t", "(1+p)*t^2", "exp(p*t)")]
    gens, _, fld, order = verify._common(gens)
    columns = verify._monomials(4, 2)
    names = ("X1", "X2", "X3", "X4")
    fast = verify._interpolated_kernel(gens, columns, order, fld, names, 2)
    _, rows = verify._matrix(gens, columns, order)
    exact = verify._kernel(rows, len(columns), fld)
    assert fast is not None and len(fast) == len(exact) > 0
    to_polys = lambda K: {verify._relation_poly(v, columns, names, fld) for v in K}
    assert to_polys(fast) == to_polys(exact)
    for rel in to_polys(fast):
        assert naive_value(rel, names, gens).is_zero_upto(order)


def _random_gens(rng, order=16):
    variables = ("t",) if rng.random() < 0.6 else ("s", "t")
    polys = [series_poly(rng, variables, 2) for _ in range(rng.randint(1, 2))]
    gens = [TruncatedSeries.from_ratfunc(RatFunc(f), variables, order) for f in polys]
    gens += [g.exp() for g in gens[: rng.randint(0, len(gens))]]
    return gens


def test_relations_are_sound():
    """Every returned relation vanishes on the generators, checked by an
    evaluation that shares no code with the search's fast paths."""
    rng = random.Random(11)
    seen = 0
    for _ in range(40):
        gens = _random_gens(rng)
        D = 3 if len(gens) > 2 else 4
        try:
            cert = relation_search(gens, D)
        except TruncationTooSmall:
            continue
        for rel in cert.relations:
            seen += 1
            assert naive_value(rel, cert.names, gens).is_zero_upto(cert.truncation)
        if cert.exact_inputs:
            polys = {n: g.to_ratfunc() for n, g in zip(cert.names, gens)}
            assert all(not r.compose(polys, RatFunc.constant(0)) for r in cert.relations)
    assert seen > 10


def test_none_up_to_means_trivial_kernel():
    gens = [S("t"), S("exp(t)")]
    cert = relation_search(gens, 4)
    assert not cert.kernel
    # a single extra column breaks independence as soon as it is a product
    cert = relation_search(gens + [S("t*exp(t)")], 2)
    assert cert.kernel_dimension >= 1


def test_td_estimate_monotone_in_degree():
    rng = random.Random(5)
    for _ in range(15):
        gens = _random_gens(rng, order=40)
        values = []
        for D in (2, 3):
            values.append(relation_search(gens, D).td.value)
        assert values[1] <= values[0]
        assert all(v <= len(gens) for v in values)


def test_td_estimate_stable_in_truncation_once_relations_hold():
    gens_at = lambda T: [S("t", T), S("t^2", T), S("exp(t)", T), S("exp(t^2)", T)]
    values = []
    for T in (73, 90, 110):
        cert = relation_search(gens_at(T), 4)
        assert kernel_holds(gens_at(2 * T), cert.columns, cert.kernel)
        values.append(cert.td.value)
    assert values == [3, 3, 3]


def test_truncation_artifact_is_rejected_at_higher_order():
    z = lambda T: [S("s*t + t", T, ("s", "t")), S("2*t^3", T, ("s", "t"))]
    gens16 = z(16) + [g.exp() for g in z(16)]
    cert = relation_search(gens16, 4)
    assert cert.relations  # spurious: 2t^3 and its exponential see few coefficients
    gens32 = z(32) + [g.exp() for g in z(32)]
    assert not kernel_holds(gens32, cert.columns, cert.kernel)


# -- fast backends agree with the reference series ---------------------------


@pytest.mark.parametrize("backend", [fastseries.DictSeries, fastseries.FlintSeries])
def test_fast_series_backends(backend):
    if backend is fastseries.FlintSeries and fastseries._flint is None:
        pytest.skip("python-flint not installed")
    rng = random.Random(3)
    for _ in range(60):
        variables = ("t",) if rng.random() < 0.5 else ("s", "t")
        order = rng.randint(2, 9)
        a = TruncatedSeries.from_ratfunc(RatFunc(series_poly(rng, variables, 3)), variables, order)
        b = TruncatedSeries.from_ratfunc(RatFunc(series_poly(rng, variables, 3)), variables, order)
        a = a.exp() if rng.random() < 0.5 else a
        fa, fb = backend.of(a), backend.of(b)
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        for fast, ref in ((fa * fb, a * b), (fa + fb, a + b), (fa - fb * c, a - b * c),
                          (fa.truncate(order - 1), a.truncate(order - 1))):
            assert {e: Fraction(v) for e, v in fast.terms.items()} == ref.terms
        assert fa.valuation() == a.valuation()
        assert (fa - fa).is_zero_upto()


def test_fast_kernel_matches_fraction_free_kernel():
    rng = random.Random(9)
    for _ in range(200):
        nrows, ncols = rng.randint(1, 7), rng.randint(1, 7)
        base = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(ncols)]
                for _ in range(max(1, nrows - 2))]
        rows = base + [[sum(rng.randint(-2, 2) * r[j] for r in base) for j in range(ncols)]
                       for _ in range(nrows - len(base))]
        assert [tuple(v) for v in fast_kernel(rows, ncols)] == \
            [tuple(v) for v in ff_rref_kernel(rows, ncols)[1]]


# -- Ax ----------------------------------------------------------------------


@pytest.mark.parametrize("z, td, lin, rank", [
    (["t"], 2, 1, 1),
    (["t", "t^2"], 3, 2, 1),
    (["t", "2*t"], 2, 1, 1),
    (["t", "s"], 4, 2, 2),
    (["t + s^2", "s"], 4, 2, 2),
])
def test_ax_examples(z, td, lin, rank):
    report = ax_check([P(x) for x in z])
    v = report.values
    assert (v["td_estimate"], v["ldim"], v["rank"]) == (td, lin, rank)
    assert v["slack"] == td - lin - rank >= 0
    assert report.verdict == PASS


def test_ax_degree_bound_one_is_inconclusive():
    report = ax_check([P("t"), P("t^2")], D=1)
    assert report.verdict == INCONCLUSIVE
    assert not report.values["stable"]


def test_ax_raises_truncation_for_artifacts():
    report = ax_check([P("t + s^2"), P("s*t + t^3")])
    assert report.verdict == PASS
    assert report.values["truncation_used"] > 16


def test_ax_on_series_input_uses_given_truncation():
    z = [S("t*exp(t) - t", 40)]
    report = ax_check(z)
    assert report.values["truncation_used"] == 16
    assert report.verdict in (PASS, INCONCLUSIVE)
    assert report.values["rank_kind"] == "lower_bound"


def test_ax_never_fails_on_random_sample():
    verdicts = []
    for i in range(20):
        z, variables = ax_instance(rng_for(7, "ax-test", i))
        report = ax_check(z, 4, 16, variables)
        assert report.verdict != FAIL
        verdicts.append(report.verdict)
    assert verdicts.count(INCONCLUSIVE) <= 4


def test_ax_rejects_nonzero_constant_term():
    with pytest.raises(ValueError):
        ax_check([P("1 + t")])


# -- powers ------------------------------------------------------------------


@pytest.mark.parametrize("z, td, qp, q", [
    (["t", "p*t"], 2, 1, 2),
    (["t"], 1, 1, 1),
    (["t", "2*t"], 1, 1, 1),
])
def test_powers_examples(z, td, qp, q):
    report = powers_sc_check([P(x) for x in z])
    v = report.values
    assert (v["td_estimate"], v["ldim_Qp"], v["ldim_Q"]) == (td, qp, q)
    assert v["value"] == td + qp - q >= 0
    assert report.verdict == PASS


def test_powers_linear_relations_lift_to_exp():
    report = powers_sc_check([P("t"), P("2*t"), P("t^2"), P("3*t - t^2")])
    assert report.values["linear.relations"] == 2
    assert report.check("linear.identity").verdict == PASS
    assert report.values["td_estimate"] <= report.values["ldim_Q"]


def test_powers_power_bound_is_exact_for_polynomials():
    report = powers_sc_check([P("t"), P("p*t"), P("p^2*t^2")])
    assert report.values["power.bound"] == report.values["ldim_Qp"] == 2
    assert report.check("power.bound").verdict == PASS


def test_powers_kernel_generators_must_be_rational():
    with pytest.raises(ValueError):
        powers_sc_check([P("t")], [P("t")])
    report = powers_sc_check([P("t"), P("p*t")], [Fraction(1, 2)])
    assert report.verdict == PASS


@pytest.mark.parametrize("x", [["t"], ["t", "t^2"]])
def test_etpower_mode(x):
    report = etpower_check([P(e) for e in x])
    assert report.verdict == PASS
    v = report.values
    n = len(x)
    assert v["ldim_Q(x/ker)"] == n
    assert v["ldim_Q(x,px/ker)"] == v["ldim_Q(x/ker)"] + v["ldim_Q(px/x,ker)"]
    assert v["chain.final.lhs"] >= v["chain.final.rhs"]
    assert v["td_estimate"] >= n


def test_etpower_requires_p_free_x():
    with pytest.raises(ValueError):
        etpower_check([P("p*t")])


def test_etpower_dependent_x_is_inconclusive():
    report = etpower_check([P("t"), P("2*t")])
    assert report.check("hypothesis").verdict == INCONCLUSIVE
    assert report.check("power_inequality").verdict == PASS
