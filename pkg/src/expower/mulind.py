"""Multiplicative independence of positive rationals.

A tuple y is multiplicatively dependent iff the rows of its prime-exponent
matrix are Z-linearly dependent; the Hermite transform of that matrix gives
the integer relations directly.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .linalg import integer_left_kernel

TRIAL_BOUND = 10 ** 6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorizationError(ValueError):
    pass


def _is_prime(n):
    """Miller-Rabin with fixed bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while not d & 1:
        d, s = d >> 1, s + 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n, tries=20):
    for c in range(1, tries + 1):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    return None


def _factor_int(n, bound, out, sign):
    f = 2
    while f * f <= n and f <= bound:
        while n % f == 0:
            out[f] = out.get(f, 0) + sign
            n //= f
        f += 1 if f == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m <= bound * bound or _is_prime(m):
            # every factor <= bound was removed, so m <= bound^2 is prime
            out[m] = out.get(m, 0) + sign
            continue
        r = isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        if d is None:
            raise FactorizationError(f"could not factor {m}")
        stack += [d, m // d]


def factor_exponents(y, bound=TRIAL_BOUND):
    """Sparse prime-exponent map of a positive rational."""
    y = Fraction(y)
    if y <= 0:
        raise ValueError(f"{y} is not a positive rational")
    out = {}
    _factor_int(y.numerator, bound, out, 1)
    _factor_int(y.denominator, bound, out, -1)
    return {pr: e for pr, e in sorted(out.items()) if e}


@dataclass
class MulIndResult:
    values: list
    primes: list
    exponents: list
    relation: tuple = None

    @property
    def independent(self):
        return self.relation is None

    def verify(self):
        if self.relation is None:
            return True
        prod = Fraction(1)
        for y, m in zip(self.values, self.relation):
            prod *= Fraction(y) ** m
        return prod == 1


def _normalize_relation(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    v = [x // g for x in v]
    lead = next(x for x in v if x)
    return tuple(-x for x in v) if lead < 0 else tuple(v)


def mult_independence(ys, bound=TRIAL_BOUND):
    """Independent, or a primitive relation ``m`` with ``prod y_i^m_i = 1``."""
    ys = [Fraction(y) for y in ys]
    facts = [factor_exponents(y, bound) for y in ys]
    primes = sorted({pr for f in facts for pr in f})
    E = [[f.get(pr, 0) for pr in primes] for f in facts]
    if not primes:
        kernel = [[int(i == 0) for i in range(len(ys))]] if ys else []
    else:
        kernel = integer_left_kernel(E)
    res = MulIndResult(ys, primes, E)
    if kernel:
        # prefer the shortest kernel row, for a readable certificate
        best = min(kernel, key=lambda v: (sum(abs(x) for x in v), v))
        res.relation = _normalize_relation(best)
        if not res.verify():
            raise AssertionError("relation from the exponent lattice does not verify")
    return res
