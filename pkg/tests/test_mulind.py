import itertools
import random
from fractions import Fraction

import pytest

from expower.generators import positive_tuple
from expower.mulind import FactorizationError, factor_exponents, mult_independence


def test_factor_examples():
    assert factor_exponents(12) == {2: 2, 3: 1}
    assert factor_exponents(Fraction(9, 10)) == {2: -1, 3: 2, 5: -1}
    assert factor_exponents(1) == {}


@pytest.mark.parametrize("bad", [0, -2, Fraction(-1, 3)])
def test_factor_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        factor_exponents(bad)


def test_factor_large_cofactors():
    big = 1000003 * 1000033
    assert factor_exponents(big) == {1000003: 1, 1000033: 1}
    assert factor_exponents(2 ** 61 - 1) == {2 ** 61 - 1: 1}
    assert factor_exponents(Fraction(1000003 ** 2, 7)) == {7: -1, 1000003: 2}


def test_factor_bound_is_configurable():
    assert factor_exponents(101 * 103, bound=5) == {101: 1, 103: 1}
    assert issubclass(FactorizationError, ValueError)


def test_mulind_examples():
    assert mult_independence([2, 3]).independent
    r = mult_independence([2, 4])
    assert r.relation == (2, -1) and r.verify()
    assert mult_independence([6, 10, 15]).independent
    assert mult_independence([1]).relation == (1,)


def _products(ys, bound):
    out = {}
    for m in itertools.product(range(-bound, bound + 1), repeat=len(ys)):
        prod = Fraction(1)
        for y, k in zip(ys, m):
            prod *= y ** k
        out.setdefault(prod, []).append(m)
    return out


def brute_force(ys, bound=6):
    """Exhaustive search over |m_i| <= bound, split into two halves of the tuple."""
    ys = [Fraction(y) for y in ys]
    h = len(ys) // 2
    left, right = _products(ys[:h], bound), _products(ys[h:], bound)
    for value, ms in right.items():
        for a in left.get(1 / value, ()):
            for b in ms:
                if any(a) or any(b):
                    return a + b
    return None


def test_brute_force_oracle_for_example():
    assert brute_force([6, 10, 15], 5) is None


def test_brute_force_agreement_200():
    rng = random.Random("mulind")
    for _ in range(200):
        ys = positive_tuple(rng)
        res = mult_independence(ys)
        assert res.verify()
        assert res.independent == (brute_force(ys) is None), ys


def test_relation_is_primitive_with_positive_lead():
    from math import gcd

    r = mult_independence([Fraction(8, 27), Fraction(4, 9), 5]).relation
    assert r is not None
    g = 0
    for x in r:
        g = gcd(g, x)
    assert g == 1 and next(x for x in r if x) > 0


def test_permutation_and_power_invariance():
    rng = random.Random(9)
    for _ in range(100):
        ys = positive_tuple(rng)
        verdict = mult_independence(ys).independent
        perm = ys[:]
        rng.shuffle(perm)
        assert mult_independence(perm).independent == verdict
        k = rng.choice([-3, -2, -1, 2, 3])
        i = rng.randrange(len(ys))
        scaled = ys[:i] + [ys[i] ** k] + ys[i + 1:]
        assert mult_independence(scaled).independent == verdict


def test_relation_outside_brute_force_window():
    # dependent, but the shortest relation needs exponents beyond 6
    ys = [Fraction(1, 37349), Fraction(4913, 2), Fraction(17, 52), Fraction(4, 3757)]
    res = mult_independence(ys)
    assert not res.independent and res.verify()
    assert max(abs(m) for m in res.relation) > 6
    assert brute_force(ys) is None
