"""Checking the Ax inequality on truncated power series.

For z in the maximal ideal of Q[[t, ...]],
    td(z, exp z) - ldim_Q(z) >= rank(d z_j / d t_i).
The transcendence degree is estimated by a bounded-degree search for
algebraic relations among the truncated series. Each relation it returns
is re-evaluated independently, and the estimate counts only when it is
stable between degree bounds D - 1 and D.
"""

from expower.arith import RatFunc
from expower.verify import ax_check, relation_search
from expower.expseries import TruncatedSeries

t, s = RatFunc.var("t"), RatFunc.var("s")


def run(z, variables, D=4):
    rep = ax_check(z, D=D, T=16, variables=variables)
    v = rep.values
    print("z =", ", ".join(map(str, z)), f"(D = {D})")
    print(f"  td estimate {v['td_estimate']} ({v['td_kind']}), ldim {v['ldim']},"
          f" rank {v['rank']}, slack {v['slack']} -> {rep.verdict}")
    for c in rep.checks:
        print(f"    [{c.verdict}] {c.name}: {c.detail}")
    print()


if __name__ == "__main__":
    run([t], ("t",))
    run([t, t * t], ("t",))
    run([t, 2 * t], ("t",))       # linear dependence lowers ldim and td together
    run([t + s * s, s], ("s", "t"))
    run([t, t * t], ("t",), D=1)  # too small a bound: nothing certified, INCONCLUSIVE

    # the relation search on its own
    T = 12
    g = [TruncatedSeries.variable("t", ("t",), T), TruncatedSeries.variable("t", ("t",), T).exp()]
    g.append(g[1] * g[1])
    cert = relation_search(g, 2, names=("u", "v", "w"))
    print("relations among t, exp(t), exp(2t) up to degree 2:")
    for r in cert.relations:
        print("  ", r)
