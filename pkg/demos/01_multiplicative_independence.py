"""Which tuples of positive rationals are multiplicatively independent?

Factor each number over the primes, stack the exponent vectors into an
integer matrix, and look for an integer kernel vector. A kernel vector m
is a relation prod y_i^m_i = 1. None means the tuple is independent.
"""

from fractions import Fraction

from expower.mulind import mult_independence


def show(ys):
    res = mult_independence(ys)
    print(f"y = {', '.join(map(str, ys))}")
    print(f"  primes    {res.primes}")
    for y, row in zip(res.values, res.exponents):
        print(f"  {str(y):>8}  {row}")
    if res.independent:
        print("  independent\n")
    else:
        m = res.relation
        product = " * ".join(f"({y})^{e}" for y, e in zip(res.values, m) if e)
        print(f"  relation {m}: {product} = 1, recomputed: {res.verify()}\n")


if __name__ == "__main__":
    show([2, 3])
    show([6, 10, 15])          # exponent matrix has full rank
    show([2, 4])               # 2^2 * 4^-1 = 1
    show([Fraction(12), Fraction(18), Fraction(2, 3)])
    # the same relation survives permuting the tuple and raising entries to powers
    show([Fraction(2, 3), 12, 18])
