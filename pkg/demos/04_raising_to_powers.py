"""Raising to a generic power p on series.

With z = (x, p x) the exponentials are exp(x) and exp(x)^p. The verifier
assembles the estimate from a relation search over Q(p). That search runs
on specializations of p and interpolates back, with an exact check on
Q[p]-coefficient series. The linear-algebra half comes from the descent
chain.
"""

from expower.arith import RatFunc
from expower.chain import power_inequality_check
from expower.verify import etpower_check, powers_sc_check

p, t = RatFunc.var("p"), RatFunc.var("t")

if __name__ == "__main__":
    for x in ([t], [t, t * t]):
        rep = etpower_check(x)
        print("x =", ", ".join(map(str, x)), "->", rep.verdict)
        for key in ("td_estimate", "ldim_Q", "ldim_Qp", "value", "chain.dims"):
            print(f"  {key} = {rep.values[key]}")
        direct = power_inequality_check(x)
        print(f"  chain module alone: {direct.final[0]} >= {direct.final[1]}\n")

    rep = powers_sc_check([t, p * t])
    print("z = t, p*t ->", rep.verdict)
    for c in rep.checks:
        print(f"  [{c.verdict}] {c.name}: {c.detail}")
