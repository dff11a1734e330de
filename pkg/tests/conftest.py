import random
import sys
from fractions import Fraction

import pytest

from expower.arith import MultiPoly, RatFunc


def random_poly(rng, variables=("p", "q"), degree=2, terms=3, coeff=5):
    total = MultiPoly.constant(0)
    for _ in range(rng.randint(1, terms)):
        e = [rng.randint(0, degree) for _ in variables]
        c = Fraction(rng.randint(-coeff, coeff), rng.randint(1, 3))
        total = total + MultiPoly.monomial(variables, e) * c
    return total


def random_ratfunc(rng, variables=("p", "q"), degree=2, allow_den=True):
    num = random_poly(rng, variables, degree)
    if not allow_den or rng.random() < 0.5:
        return RatFunc(num)
    den = random_poly(rng, variables, 1)
    while not den:
        den = random_poly(rng, variables, 1)
    return RatFunc(num, den)


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda x: int(x.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
