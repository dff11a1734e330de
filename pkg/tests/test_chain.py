import random

import pytest

from expower.arith import QQ, Field, RatFunc
from expower.chain import (ChainCertificate, TelescopingError, chain_descent,
                           power_inequality_check, telescoping_check)
from expower.generators import chain_generators, power_instance
from expower.subspace import intersect, ldim, span

p, q = RatFunc.var("p"), RatFunc.var("q")
QP = Field.of("p")


@pytest.mark.parametrize("gens, dims", [([1, p], (2, 1, 0)), ([1], (1, 0)), ([], (0,))])
def test_descent_examples(gens, dims):
    cert = chain_descent(gens)
    assert tuple(cert.dims) == dims
    assert cert.length == len(dims) - 1
    assert telescoping_check(cert)


def test_hand_oracle_span_1_p():
    cert = chain_descent([1, p])
    assert cert.chain[1] == span([1])
    assert intersect(span([1]), span([1 / p])).dim == 0
    assert cert.step_terms == [0, 1] and cert.telescoping_lhs == 1


def test_telescoping_reports_bad_step():
    cert = chain_descent([1, p])
    bad = ChainCertificate(cert.p, cert.chain, cert.dims, [1, 1], cert.qp_step_terms,
                           cert.telescoping_lhs, cert.qp_dim)
    with pytest.raises(TelescopingError) as info:
        telescoping_check(bad)
    assert info.value.step == 0


@pytest.mark.parametrize("x, lhs, rhs", [([q], 1, 1), ([q, q ** 2], 2, 2), ([q, p * q], 1, 1)])
def test_power_inequality_examples(x, lhs, rhs):
    rep = power_inequality_check(x, [])
    assert rep.holds
    assert rep.final == (lhs, rhs)
    assert ldim(QQ, [p * e for e in x], x) == lhs and ldim(QP, x) == rhs


def test_kernel_generators_must_be_p_free():
    with pytest.raises(ValueError):
        power_inequality_check([q], [p])


def chain_properties_hold(gens):
    cert = chain_descent(gens)
    d = cert.dims
    assert d[-1] == 0 and cert.length <= d[0]
    assert all(a > b for a, b in zip(d, d[1:]))
    for a, b in zip(cert.chain, cert.chain[1:]):
        assert a != b or a.dim == 0
    assert all(s >= t for s, t in zip(cert.step_terms, cert.qp_step_terms))
    assert sum(cert.step_terms) == cert.telescoping_lhs
    assert cert.telescoping_lhs >= cert.qp_dim
    return telescoping_check(cert)


def test_random_chains_100():
    rng = random.Random("chain")
    assert all(chain_properties_hold(chain_generators(rng)) for _ in range(100))


def test_random_power_inequalities_with_kernels():
    rng = random.Random("power")
    for i in range(60):
        x, k = power_instance(rng, kernel=i % 3)
        rep = power_inequality_check(x, k)
        assert rep.holds, rep.failures
        assert rep.final[0] >= rep.final[1]
