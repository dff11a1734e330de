"""The descent chain A_{i+1} = A_i ∩ p^-1 A_i and the inequality it proves.

Start from A_0 = span_Q(x, p x) for a tuple x of rational functions in a
power variable p and a generic variable q. Each step keeps the part of A_i
that stays inside A_i after multiplying by p, so dimensions strictly drop
until the chain reaches {0}. Summing the step contributions gives
    ldim_Q(p x / x, k) >= ldim_Q(p)(x / k).
"""

from expower.arith import Field, RatFunc
from expower.chain import chain_descent, power_inequality_check, telescoping_check
from expower.subspace import ldim

p, q = RatFunc.var("p"), RatFunc.var("q")


def walk(x, k=()):
    print("x =", ", ".join(map(str, x)), "| k =", ", ".join(map(str, k)) or "-")
    cert = chain_descent([p * e for e in x] + list(x) + list(k))
    for i, A in enumerate(cert.chain):
        basis = "; ".join(map(str, A.elements())) or "0"
        print(f"  A_{i}  dim {A.dim}: {basis}")
    print(f"  step terms over Q {cert.step_terms}, over Q(p) {cert.qp_step_terms}")
    print(f"  telescoping identity recomputed: {telescoping_check(cert)}")
    rep = power_inequality_check(x, k)
    print(f"  ldim_Q(p x / x, k) = {rep.final[0]} >= ldim_Q(p)(x / k) = {rep.final[1]}:"
          f" {rep.holds}\n")


if __name__ == "__main__":
    walk([q])
    walk([q, q ** 2])
    walk([q, p * q])             # p x and x overlap, the left side shrinks
    walk([q, p ** 2 * q + q ** 2], k=[RatFunc(1)])
    # Q(p)-dimension can be strictly smaller than Q-dimension
    x = [q, p * q, p ** 2 * q]
    print("ldim over Q:", ldim(Field(), x), " over Q(p):", ldim(Field.of("p"), x))
