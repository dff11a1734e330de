"""Built-in golden examples, run by ``expower selftest``.

Each example recomputes a small hand-checkable fact with the library and
compares it with the known answer.
"""

import random
from fractions import Fraction

from .arith import QQ, Field, MultiPoly, RatFunc, poly_gcd, rational_arith
from .chain import chain_descent, power_inequality_check, telescoping_check
from .grammar import SeriesContext, parse_expr
from .instance import InstanceError, parse_instance
from .linalg import ExactMatrix, rank_kernel, rref, smith_hermite
from .mulind import factor_exponents, mult_independence
from .report import CheckResult, SectionResult
from .expseries import ExpPolynomial, TruncatedSeries, eval_exp_poly, expalg_witness
from .subspace import disjointness_check, flatten, intersect, ldim, span, span_ops
from .verify import FAIL, INCONCLUSIVE, PASS, ax_check, powers_sc_check, relation_search

QP = Field.of("p")


def P(text):
    return parse_expr(text)


def S(text, order=8, variables=("t",)):
    v = parse_expr(text, series=SeriesContext(tuple(sorted(variables)), order))
    if isinstance(v, TruncatedSeries):
        return v
    return TruncatedSeries.from_ratfunc(v, tuple(sorted(variables)), order)


def agree(a, b):
    """Equal up to the smaller certified order."""
    order = min(a.certified, b.certified)
    return (a.truncate(order) - b.truncate(order)).is_zero_upto(order)


def raises(fn, exc=Exception):
    try:
        fn()
    except exc:
        return True
    return False


def M(rows, field=QQ):
    return ExactMatrix.from_rows([[P(x) if isinstance(x, str) else x for x in r] for r in rows],
                                 field)


def _ldim_addition(seed):
    rng = random.Random(seed)
    from .generators import field_tuple

    for _ in range(5):
        x, y, a = (field_tuple(rng, rng.randint(1, 3)) for _ in range(3))
        lhs = ldim(QQ, x + y, a)
        mixed = list(y) + list(a)
        rng.shuffle(mixed)
        if lhs != ldim(QQ, list(reversed(x)), mixed) + ldim(QQ, y, a):
            return False
    return True


def _chain_dims(gens, dims):
    cert = chain_descent([P(g) for g in gens])
    return tuple(cert.dims) == dims and cert.length == len(dims) - 1


def _random_chain():
    from .generators import chain_generators

    rng = random.Random(1)
    return all(telescoping_check(chain_descent(chain_generators(rng))) for _ in range(3))


def _power(x, lhs, rhs):
    rep = power_inequality_check([P(e) for e in x])
    return rep.holds and rep.final == (lhs, rhs)


def _cli(text, command, flags=None, verdict=PASS, check=None):
    from .commands import run_file
    from .report import Report

    report = Report(command, run_file(parse_instance(text), command, flags or {}))
    if report.verdict != verdict:
        return False
    return check(report) if check else True


def _expalg(fs, xs, holds, total=True):
    n = len(fs)
    res = expalg_witness([ExpPolynomial.parse(f, n) for f in fs], [S(x) for x in xs], total)
    return res.holds == holds


def _ax(z, td, lin, r):
    rep = ax_check([P(x) for x in z])
    v = rep.values
    return rep.verdict == PASS and (v["td_estimate"], v["ldim"], v["rank"], v["slack"]) == \
        (td, lin, r, td - lin - r)


def _powers(z, td, qp, q):
    rep = powers_sc_check([P(x) for x in z])
    v = rep.values
    return rep.verdict == PASS and (v["td_estimate"], v["ldim_Qp"], v["ldim_Q"]) == (td, qp, q)


X1, X2 = MultiPoly.var("x1"), MultiPoly.var("x2")

EXAMPLES = [
    # rationals, polynomials, rational functions
    ("rational add", lambda: rational_arith("add", Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)),
    ("rational mul by zero", lambda: rational_arith("mul", 0, Fraction(7, 3)) == 0),
    ("rational div by zero", lambda: raises(lambda: rational_arith("div", Fraction(1, 2), 0),
                                            ZeroDivisionError)),
    ("poly product", lambda: P("(p - q)*(p + q)") == P("p^2 - q^2")),
    ("poly cancellation", lambda: not (P("p^2") + P("-p^2"))),
    ("poly evaluation", lambda: P("p^2 + q").evaluate({"p": 2, "q": Fraction(1, 2)}) == Fraction(9, 2)),
    ("gcd difference of squares", lambda: poly_gcd(P("p^2 - q^2").num, P("p - q").num) == P("p - q").num),
    ("gcd perfect square", lambda: poly_gcd(P("p^2 + 2*p + 1").num, P("p + 1").num) == P("p + 1").num),
    ("gcd coprime", lambda: poly_gcd(P("p").num, P("q").num) == MultiPoly.constant(1)),
    ("ratfunc normalize", lambda: str(P("(p^2 - 1)/(p - 1)")) == "p + 1"),
    ("ratfunc add", lambda: P("1/p + 1/q") == RatFunc(P("p + q").num, P("p*q").num)),
    ("ratfunc inverse of zero", lambda: raises(lambda: RatFunc.constant(0).inv(), ZeroDivisionError)),
    # linear algebra
    ("rank over Q(p)", lambda: rank_kernel(M([[1, "p"], ["p", "p^2"]], QP)) ==
     (1, [(-P("p"), Fraction(1))])),
    ("rank identity", lambda: rank_kernel(ExactMatrix.identity(2)) == (2, [])),
    ("rank single row", lambda: (lambda r: r[0] == 1 and len(r[1]) == 2)(rank_kernel(M([[1, 2, 3]])))),
    ("rref proportional", lambda: rref(M([[2, 4], [1, 2]])).tolist() == [[1, 2], [0, 0]]),
    ("rref zero", lambda: rref(M([[0, 0], [0, 0]])).tolist() == [[0, 0], [0, 0]]),
    ("rref permutation", lambda: rref(M([[0, 1], [1, 0]])).tolist() == [[1, 0], [0, 1]]),
    ("smith 2x2", lambda: smith_hermite([[2, 4], [6, 8]]).normal_form == [[2, 0], [0, 4]]),
    ("smith identity", lambda: smith_hermite([[1, 0], [0, 1]]).normal_form == [[1, 0], [0, 1]]),
    ("hermite zero", lambda: smith_hermite([[0, 0], [0, 0]], "hermite").normal_form == [[0, 0], [0, 0]]),
    # subspaces
    ("flatten monomials", lambda: flatten([P("1"), P("p"), P("p^2")])[1].tolist() ==
     [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ("flatten over Q(p)", lambda: flatten([P("q"), P("p*q")], QP)[1].tolist() == [[1], [P("p")]]),
    ("flatten proportional", lambda: flatten([P("1 + p"), P("2 + 2*p")])[1].tolist() == [[1, 1], [2, 2]]),
    ("ldim over Q", lambda: ldim(QQ, [P("1"), P("p"), P("p^2")]) == 3),
    ("ldim over Q(p)", lambda: ldim(QP, [P("1"), P("p"), P("p^2")]) == 1),
    ("ldim relative", lambda: ldim(QQ, [P("p*q")], [P("q")]) == 1),
    ("ldim addition formula", lambda: _ldim_addition(7)),
    ("intersection with inverse", lambda: span_ops(
        "equal", intersect(span([P("1"), P("p")]), span([P("1"), P("1/p")])), span([P("1")]))),
    ("intersection disjoint", lambda: intersect(span([P("p")]), span([P("q")])).dim == 0),
    ("intersection idempotent", lambda: span_ops(
        "equal", intersect(span([P("p"), P("q")]), span([P("p"), P("q")])), span([P("p"), P("q")]))),
    ("span sum", lambda: span_ops("equal", span_ops("sum", span([P("1")]), span([P("p")])),
                                  span([P("1"), P("p")]))),
    ("span member", lambda: not span_ops("member", span([P("1"), P("p")]), P("p^2"))),
    ("span equal", lambda: span_ops("equal", span([P("1 + p"), P("1 - p")]), span([P("1"), P("p")]))),
    ("disjoint by criterion", lambda: disjointness_check([P("p")], [P("q")]).verdict ==
     "disjoint_by_criterion"),
    ("disjoint counterexample", lambda: disjointness_check([P("p")], [P("p")]).verdict ==
     "counterexample"),
    ("disjoint over Q", lambda: disjointness_check([], [P("q")]).verdict == "disjoint_by_criterion"),
    # descent chain
    ("chain span{1, p}", lambda: _chain_dims(["1", "p"], (2, 1, 0))),
    ("chain span{1}", lambda: _chain_dims(["1"], (1, 0))),
    ("chain zero", lambda: _chain_dims([], (0,))),
    ("telescoping span{1, p}", lambda: (lambda c: telescoping_check(c) and c.telescoping_lhs == 1
                                        and tuple(c.step_terms) == (0, 1))(chain_descent([P("1"), P("p")]))),
    ("telescoping zero", lambda: telescoping_check(chain_descent([]))),
    ("telescoping random", _random_chain),
    ("power inequality (q)", lambda: _power(["q"], 1, 1)),
    ("power inequality (q, q^2)", lambda: _power(["q", "q^2"], 2, 2)),
    ("power inequality (q, pq)", lambda: _power(["q", "p*q"], 1, 1)),
    # multiplicative independence
    ("factor 12", lambda: factor_exponents(12) == {2: 2, 3: 1}),
    ("factor 9/10", lambda: factor_exponents(Fraction(9, 10)) == {2: -1, 3: 2, 5: -1}),
    ("factor 1", lambda: factor_exponents(1) == {}),
    ("mulind (2, 3)", lambda: mult_independence([2, 3]).independent),
    ("mulind (2, 4)", lambda: mult_independence([2, 4]).relation == (2, -1)),
    ("mulind (6, 10, 15)", lambda: mult_independence([6, 10, 15]).independent),
    # series
    ("series product", lambda: S("(1 + t)*(1 - t)") == S("1 - t^2")),
    ("series truncation", lambda: (lambda s: not s.terms and s.certified == 8)(S("t^5") * S("t^5"))),
    ("series inverse", lambda: S("1 - t").inv() == S(" + ".join(["1"] + [f"t^{k}" for k in range(1, 9)]))),
    ("series exp", lambda: S("exp(t)", 4) == S("1 + t + t^2/2 + t^3/6 + t^4/24", 4)),
    ("series log exp", lambda: S("log(exp(t))") == S("t")),
    ("series exp of unit", lambda: raises(lambda: S("exp(1 + t)"))),
    ("derivation t^2 s", lambda: agree(S("t^2*s", 8, ("s", "t")).derive("t"),
                                       S("2*t*s", 8, ("s", "t")))),
    ("derivation of exp", lambda: (lambda a: agree(a.exp().derive("t"), a.derive("t") * a.exp()))(
        S("t^2"))),
    ("derivation off diagonal", lambda: not S("t", 8, ("s", "t")).derive("s").terms),
    ("exp poly e^t - 1 - t", lambda: eval_exp_poly(ExpPolynomial.parse("y1 - 1 - x1", 1), [S("t")])
     == S("exp(t) - 1 - t")),
    ("exp poly at zero", lambda: eval_exp_poly(ExpPolynomial.parse("y1", 1), [S("0")]) == S("1")),
    ("exp homomorphism", lambda: not eval_exp_poly(ExpPolynomial.parse("y1*y2 - y3", 3),
                                                   [S(x, 8, ("s", "t")) for x in ("t", "s", "t + s")])
     .terms),
    ("witness simple zero", lambda: _expalg(["y1 - 1"], ["0"], True)),
    ("witness double zero", lambda: _expalg(["y1 - 1 - x1"], ["0"], False)),
    ("witness triangular", lambda: _expalg(["x1", "x2 - y1 + 1"], ["0", "0"], True)),
    # relation search and verifiers
    ("relations (t, t^2)", lambda: (lambda c: c.kernel_dimension == 1 and c.relations[0] ==
                                    X1 ** 2 - X2)(relation_search([S("t", 16), S("t^2", 16)], 2,
                                                                  ("x1", "x2")))),
    ("relations (e^t, e^-t)", lambda: (lambda c: c.relations == [X1 * X2 - 1])(
        relation_search([S("exp(t)", 16), S("exp(-t)", 16)], 2, ("x1", "x2")))),
    ("relations (t, e^t)", lambda: relation_search([S("t", 12), S("exp(t)", 12)], 3).describe()
     == "none_up_to(D=3, T=12)" and relation_search([S("t", 16), S("exp(t)", 16)], 4).td.stable),
    ("ax (t)", lambda: _ax(["t"], 2, 1, 1)),
    ("ax (t, t^2)", lambda: _ax(["t", "t^2"], 3, 2, 1)),
    ("ax (t, 2t)", lambda: _ax(["t", "2*t"], 2, 1, 1)),
    ("powers (t, pt)", lambda: _powers(["t", "p*t"], 2, 1, 2)),
    ("powers (t)", lambda: _powers(["t"], 1, 1, 1)),
    ("powers (t, 2t)", lambda: _powers(["t", "2*t"], 1, 1, 1)),
    # instance files and the command layer
    ("parse mulind", lambda: parse_instance("vars p:power q:generic; mulind: 2, 4")
     .sections[0].data["y"] == [2, 4]),
    ("parse ax", lambda: (lambda f: f.header.T == 8 and f.sections[0].data["z"] == [P("t"), P("t^2")])(
        parse_instance("vars t:series T=8; ax: z = t, t^2; m = 1"))),
    ("parse rejects non-positive", lambda: raises(lambda: parse_instance("mulind: -2, 3"),
                                                  InstanceError)),
    ("run mulind", lambda: _cli("mulind: 2, 3", "mulind")),
    ("run chain", lambda: _cli("vars p:power q:generic\nchain: x = q", "chain",
                               check=lambda r: r.sections[0].values["chain.dims"] == (2, 1, 0))),
    ("run ax at D = 1", lambda: _cli("vars t:series\nax: z = t, t^2", "ax", {"D": 1},
                                     verdict=INCONCLUSIVE)),
]


def run_selftest(names=None):
    results = []
    for i, (name, fn) in enumerate(EXAMPLES, 1):
        if names and name not in names:
            continue
        result = SectionResult("selftest", i, 0, values={"example": name})
        try:
            ok = bool(fn())
            result.checks.append(CheckResult("golden", PASS if ok else FAIL))
        except Exception as exc:  # a crashing example is reported, not raised
            result.error = f"{type(exc).__name__}: {exc}"
        results.append(result)
    return results
