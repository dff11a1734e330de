"""Seeded random instances shared by the property tests and the CLI."""

import random
from fractions import Fraction

from .arith import MultiPoly, RatFunc


def rng_for(seed, *salt):
    return random.Random(f"{seed}:{':'.join(map(str, salt))}")


def small_poly(rng, variables, degree=2, terms=3, coeff=3):
    total = MultiPoly.constant(0)
    for _ in range(rng.randint(1, terms)):
        exps = [0] * len(variables)
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(len(variables))] += 1
        c = rng.randint(-coeff, coeff) or 1
        total = total + MultiPoly.monomial(variables, exps) * c
    return total


def field_element(rng, variables=("p", "q"), degree=2, den_prob=0.25):
    """A random element of Q(variables); denominators are short when present."""
    num = small_poly(rng, variables, degree)
    if rng.random() < den_prob:
        den = small_poly(rng, variables, 1, 2)
        if den:
            return RatFunc(num, den)
    return RatFunc(num)


def field_tuple(rng, size, variables=("p", "q"), degree=2, den_prob=0.25):
    return [field_element(rng, variables, degree, den_prob) for _ in range(size)]


def subfield_sample(rng, var, size, degree=2):
    """Elements of Q(var): polynomials and a few reciprocals."""
    out = []
    for _ in range(size):
        f = small_poly(rng, (var,), degree)
        if rng.random() < 0.3 and f.variables:
            out.append(RatFunc(1, f))
        else:
            out.append(RatFunc(f))
    return out


def chain_generators(rng, max_dim=6, p_degree=4, generic=("q",)):
    """Generators of a random A_0 inside Q[p, q] (dim <= max_dim, p-degree <= p_degree)."""
    k = rng.randint(1, max_dim)
    out = []
    for _ in range(k):
        total = MultiPoly.constant(0)
        for _ in range(rng.randint(1, 3)):
            e = [rng.randint(0, p_degree)] + [rng.randint(0, 2) for _ in generic]
            total = total + MultiPoly.monomial(("p",) + tuple(generic), e) * (rng.randint(-2, 2) or 1)
        out.append(RatFunc(total))
    return out


def power_instance(rng, kernel=0):
    """``(x, k)`` for the power inequality: x from Q(p, q), k p-free."""
    x = [RatFunc(small_poly(rng, ("p", "q"), 2)) for _ in range(rng.randint(1, 3))]
    k = [RatFunc(small_poly(rng, ("q",), 2)) for _ in range(kernel)]
    return x, k


PRIMES_20 = (2, 3, 5, 7, 11, 13, 17, 19)


def _value(primes, exps):
    y = Fraction(1)
    for pr, e in zip(primes, exps):
        y *= Fraction(pr) ** e
    return y


def positive_tuple(rng, n_max=4, primes=PRIMES_20, exp_range=3):
    """Positive rationals over primes <= 20 with exponents in [-exp_range, exp_range].

    Half the tuples have a full-rank exponent matrix (a nonzero diagonal
    against distinct primes); the other half carry a planted relation with
    coefficients in [-3, 3]. Uniform sampling would produce dependent tuples
    whose shortest relation lies outside any small brute-force window.
    """
    n = rng.randint(1, n_max)
    dependent = rng.random() < 0.5
    k = n - 1 if dependent else n
    pool = rng.sample(primes, min(len(primes), k + rng.randint(0, 2)))
    small = 1 if dependent else exp_range
    rows = []
    for i in range(k):
        row = [0] * len(pool)
        row[i] = rng.choice([e for e in range(-small, small + 1) if e])
        for j in range(i + 1, len(pool)):
            row[j] = rng.randint(-small, small)
        rows.append(row)
    if dependent:
        if not rows:
            rows.append([0] * len(pool))
        elif len(rows) == 1 or rng.random() < 0.5:
            a = rng.choice([-3, -2, -1, 1, 2, 3])
            rows.append([a * e for e in rng.choice(rows)])
        else:
            r1, r2 = rng.sample(rows, 2)
            a, b = rng.choice([-1, 1]), rng.choice([-1, 1])
            rows.append([a * x + b * y for x, y in zip(r1, r2)])
    rng.shuffle(rows)
    return [_value(pool, r) for r in rows]


def series_poly(rng, variables, degree=3, terms=3, coeff=3):
    """A random polynomial with zero constant term, for exp arguments."""
    while True:
        f = small_poly(rng, variables, degree, terms, coeff)
        f = f - f.constant_term()
        if f:
            return f


def ax_instance(rng, n_max=2, m_max=2, degree=3):
    """Random polynomial tuple ``z`` with zero constant terms for the Ax check."""
    m = rng.randint(1, m_max)
    variables = ("s", "t")[-m:] if m <= 2 else tuple(f"t{i}" for i in range(1, m + 1))
    n = rng.randint(1, n_max)
    return [RatFunc(series_poly(rng, variables, degree)) for _ in range(n)], variables


GENERATED_KINDS = ("mulind", "ldim", "chain", "ax")


def _join(items):
    return ", ".join(str(x) for x in items)


def generate_instance(seed, count=5, kinds=GENERATED_KINDS):
    """Text of a random instance file with ``count`` sections of each kind."""
    lines = ["# random instances, regenerate with: expower generate "
             f"--seed {seed} --count {count} --kinds {','.join(kinds)}",
             "format 1", f"vars p:power q:generic t:series s:series seed={seed}"]
    for kind in kinds:
        if kind not in GENERATED_KINDS:
            raise ValueError(f"cannot generate {kind!r} sections (choose from "
                             f"{', '.join(GENERATED_KINDS)})")
        for i in range(count):
            rng = rng_for(seed, "generate", kind, i)
            if kind == "mulind":
                lines.append(f"mulind: {_join(positive_tuple(rng))}")
            elif kind == "ldim":
                K = rng.choice(["Q", "p"])
                X = field_tuple(rng, rng.randint(1, 3))
                Y = field_tuple(rng, rng.randint(0, 2))
                lines.append(f"ldim: K = {K}; X = {_join(X)}" + (f"; Y = {_join(Y)}" if Y else ""))
            elif kind == "chain":
                x, k = power_instance(rng, rng.randint(0, 2))
                lines.append(f"chain: x = {_join(x)}" + (f"; k = {_join(k)}" if k else ""))
            else:
                z, variables = ax_instance(rng)
                # m = 1 selects the first declared series variable, t
                lines.append(f"ax: z = {_join(z)}; m = {len(variables)}")
    return "\n".join(lines) + "\n"
