"""Hypothesis-driven checks of cross-module invariants.

Most inputs come from the seeded generators; hypothesis chooses the seeds
and shapes, so a failure shrinks to a small seed that replays exactly.
"""

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from expower.arith import QQ, Field, RatFunc
from expower.chain import chain_descent, power_inequality_check
from expower.commands import run_file
from expower.generators import (chain_generators, field_tuple, generate_instance, positive_tuple,
                                power_instance, series_poly)
from expower.grammar import parse_expr
from expower.instance import parse_instance
from expower.mulind import mult_independence
from expower.report import Report
from expower.expseries import TruncatedSeries
from expower.subspace import intersect, ldim, span, span_ops
from expower.verify import FAIL, ax_check, relation_search

QP = Field.of("p")
seeds = st.integers(0, 10 ** 6)
quick = settings(max_examples=40, deadline=None)


@quick
@given(seeds)
def test_ratfunc_field_laws(seed):
    rng = random.Random(seed)
    a, b, c = field_tuple(rng, 3)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    if b:
        assert (a / b) * b == a


@quick
@given(seeds)
def test_printed_ratfunc_reparses(seed):
    rng = random.Random(seed)
    for x in field_tuple(rng, 3):
        assert parse_expr(str(x), {"p", "q"}) == x


@quick
@given(seeds, st.sampled_from([QQ, QP]))
def test_ldim_monotone_in_the_base(seed, field):
    rng = random.Random(seed)
    X, Y, Z = (field_tuple(rng, rng.randint(0, 3)) for _ in range(3))
    assert ldim(field, X, Y + Z) <= ldim(field, X, Y)


@quick
@given(seeds)
def test_sum_and_intersection_dimensions(seed):
    rng = random.Random(seed)
    A = span(field_tuple(rng, rng.randint(0, 4), den_prob=0))
    B = span(field_tuple(rng, rng.randint(0, 4), den_prob=0))
    assert span_ops("sum", A, B).dim + intersect(A, B).dim == A.dim + B.dim


@quick
@given(seeds)
def test_chain_steps_never_stall(seed):
    cert = chain_descent(chain_generators(random.Random(seed)))
    for a, b in zip(cert.chain, cert.chain[1:]):
        assert b.dim < a.dim
        # a step that kept everything would be a nonzero Q(p)-subspace
        assert a != b or a.dim == 0
    assert all(s >= t for s, t in zip(cert.step_terms, cert.qp_step_terms))


@quick
@given(seeds, st.integers(0, 2))
def test_power_inequality_with_kernels(seed, kernel):
    x, k = power_instance(random.Random(seed), kernel)
    rep = power_inequality_check(x, k)
    assert rep.holds, rep.failures


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([-3, -2, -1, 1, 2, 3]))
def test_mulind_verdict_invariant_under_permutation_and_powers(seed, k):
    rng = random.Random(seed)
    ys = positive_tuple(rng)
    base = mult_independence(ys).independent
    shuffled = ys[:]
    rng.shuffle(shuffled)
    assert mult_independence(shuffled).independent == base
    i = rng.randrange(len(ys))
    powered = ys[:i] + [Fraction(ys[i]) ** k] + ys[i + 1:]
    res = mult_independence(powered)
    assert res.independent == base and res.verify()


@quick
@given(seeds)
def test_exp_and_log_are_inverse(seed):
    rng = random.Random(seed)
    vs = ("s", "t")
    a = TruncatedSeries.from_ratfunc(RatFunc(series_poly(rng, vs)), vs, 8)
    assert a.exp().log().agrees(a)
    u = 1 + a
    assert u.log().exp().agrees(u)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_polynomial_relations_hold_identically(seed):
    rng = random.Random(seed)
    t = RatFunc.var("t")
    gens = [t ** rng.randint(1, 3) * rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
    series = [TruncatedSeries.from_ratfunc(g, ("t",), 24) for g in gens]
    names = tuple(f"g{i}" for i in range(len(gens)))
    cert = relation_search(series, 3, names)
    assert cert.verified
    for rel in cert.relations:
        # substitute the generators symbolically: exact inputs give exact identities
        value = parse_expr(str(rel), set(names))
        total = RatFunc(0)
        for exps, c in value.num.terms.items():
            term = RatFunc(c)
            for name, e in zip(value.num.variables, exps):
                term = term * gens[names.index(name)] ** e
            total = total + term
        assert not total


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_ax_never_fails(seed):
    rng = random.Random(seed)
    vs = ("s", "t")[: rng.randint(1, 2)]
    z = [RatFunc(series_poly(rng, vs, 2)) for _ in range(rng.randint(1, 2))]
    assert ax_check(z, 3, 12, vs).verdict != FAIL


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_generated_reports_are_deterministic(seed):
    text = generate_instance(seed, 2, ("mulind", "ldim", "chain"))
    runs = [Report("all", run_file(parse_instance(text), "all", {"seed": seed})).machine()
            for _ in range(2)]
    assert runs[0] == runs[1]
