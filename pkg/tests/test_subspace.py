import random


from expower.arith import QQ, Field, RatFunc
from expower.generators import field_tuple, subfield_sample
from expower.subspace import (disjointness_check, flatten, intersect, ldim, span, span_ops,
                              stabilized_sample)

QP = Field.of("p")
p, q = RatFunc.var("p"), RatFunc.var("q")


def test_flatten_examples():
    ctx, m = flatten([1, p, p ** 2], QQ)
    assert len(ctx.monomial_support) == 3
    assert m.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    ctx, m = flatten([q, p * q], QP)
    assert ctx.residual_variables == ("q",) and ctx.monomial_support == ((1,),)
    assert m.tolist() == [[1], [p]]
    _, m = flatten([1 + p, 2 + 2 * p], QQ)
    assert m.tolist() == [[1, 1], [2, 2]]


def test_flatten_reconstructs(rng):
    for _ in range(50):
        xs = field_tuple(rng, 4)
        for field in (QQ, QP):
            ctx, m = flatten(xs, field)
            for x, row in zip(xs, m.rows):
                assert ctx.reconstruct(row) == x


def test_ldim_examples():
    assert ldim(QQ, [1, p, p ** 2]) == 3
    assert ldim(QP, [1, p, p ** 2]) == 1
    assert ldim(QQ, [p * q], [q]) == 1
    assert ldim("Q(p)", [p * q], [q]) == 0


def test_ldim_kernel_generators():
    assert ldim(QQ, [q, q + 1], kernel=[1]) == 1


def test_intersect_examples():
    A = span([1, p])
    assert intersect(A, span([1, 1 / p])) == span([1])
    assert intersect(span([p]), span([q])).dim == 0
    assert intersect(A, A) == A


def test_span_ops_examples():
    assert span_ops("sum", span([1]), span([p])) == span([1, p])
    assert span_ops("member", span([1, p]), p ** 2) is False
    assert span_ops("member", span([1, p]), 3 - p) is True
    assert span_ops("equal", span([1 + p, 1 - p]), span([1, p])) is True


def test_dimension_formula_random_pairs(rng):
    for _ in range(60):
        field = rng.choice([QQ, QP])
        A = span(field_tuple(rng, rng.randint(1, 4), den_prob=0.1), field)
        B = span(field_tuple(rng, rng.randint(1, 4), den_prob=0.1) + A.elements()[:1], field)
        S = span_ops("sum", A, B)
        assert S.dim + intersect(A, B).dim == A.dim + B.dim


def test_monotonicity(rng):
    for _ in range(100):
        X, Y, Z = (field_tuple(rng, rng.randint(0, 3)) for _ in range(3))
        for field in (QQ, QP):
            assert ldim(field, X, Y + Z) <= ldim(field, X, Y)


def addition_formula_holds(rng):
    xs = field_tuple(rng, rng.randint(1, 3))
    ys = field_tuple(rng, rng.randint(0, 3))
    A = field_tuple(rng, rng.randint(0, 3))
    field = rng.choice([QQ, QP])
    lhs = ldim(field, xs + ys, A)
    shuffled = ys + A
    rng.shuffle(shuffled)
    return lhs == ldim(field, xs, shuffled) + ldim(field, ys, A)


def test_addition_formula_500():
    rng = random.Random("addition")
    assert all(addition_formula_holds(rng) for _ in range(500))


def test_disjointness_examples():
    assert disjointness_check([p], [q]).verdict == "disjoint_by_criterion"
    res = disjointness_check([p], [p])
    assert res.verdict == "counterexample"
    assert [str(x) for x in res.tuple] == ["1", "p"]
    assert disjointness_check([], [q]).verdict == "disjoint_by_criterion"


def subfield_tuple_keeps_ldim(rng):
    tup = subfield_sample(rng, "q", rng.randint(1, 4))
    return ldim(QP, tup) == ldim(QQ, tup)


def test_ldim_preserved_for_subfield_tuples_100():
    rng = random.Random("preservation")
    assert all(subfield_tuple_keeps_ldim(rng) for _ in range(100))


def relative_drop_shrinks(rng):
    xs = field_tuple(rng, rng.randint(1, 3))
    A = subfield_sample(rng, "q", rng.randint(0, 2))
    extra = [RatFunc(1)] + [x.den for x in xs if x.den.variables == ("q",)]

    def grow(r):
        return [q ** (r + 1), q ** -(r + 1)] + subfield_sample(rng, "q", 1) + extra * (r == 0)

    measures = [lambda s: ldim(QP, xs, s), lambda s: ldim(QQ, xs, s)]
    L_fin, (dk, de) = stabilized_sample(A, grow, measures, patience=1, max_rounds=4)
    return dk - de <= ldim(QP, xs, A) - ldim(QQ, xs, A)


def test_disjointness_inequality_200():
    rng = random.Random("disjoint-inequality")
    assert all(relative_drop_shrinks(rng) for _ in range(200))


def test_stabilized_sample_stops():
    calls = []

    def grow(r):
        calls.append(r)
        return [q ** r]

    sample, values = stabilized_sample([], grow, [lambda s: min(len(s), 2)], patience=2)
    assert values == (2,) and len(calls) == 4
