"""The descent chain A_{i+1} = A_i ∩ p^-1 A_i and the power inequality.

For a finite-dimensional Q-subspace A_0 of Q(p, q) the chain strictly
decreases until it reaches {0}, because a nonzero subspace stable under
multiplication by p would be a Q(p)-vector space of finite Q-dimension.
The telescoping identity

    ldim_Q(A_0/A_1) = sum_i ldim_Q(A_i / (A_{i+1} + p A_{i+1}))

then bounds ldim_Q(A_0/A_1) below by ldim_Q(p)(A_0).
"""

from dataclasses import dataclass, field

from .arith import QQ, Field, RatFunc, as_ratfunc
from .subspace import intersect, ldim, span, span_ops


class ChainError(RuntimeError):
    """The descent did not terminate within dim(A_0) + 1 steps (a bug)."""


class TelescopingError(AssertionError):
    def __init__(self, step, message):
        self.step = step
        super().__init__(f"step {step}: {message}")


@dataclass
class ChainCertificate:
    p: str
    chain: list
    dims: list
    step_terms: list
    qp_step_terms: list
    telescoping_lhs: int
    qp_dim: int

    @property
    def length(self):
        return len(self.chain) - 1

    def summary(self):
        return {
            "dims": tuple(self.dims),
            "N": self.length,
            "step_terms": tuple(self.step_terms),
            "qp_step_terms": tuple(self.qp_step_terms),
            "telescoping_lhs": self.telescoping_lhs,
            "qp_dim": self.qp_dim,
        }


def _plus_p_multiple(A, pv):
    return span_ops("sum", A, A.scale(pv))


def chain_descent(A0_gens, p="p"):
    """Run the descent from ``A_0 = span_Q(A0_gens)`` down to ``{0}``."""
    pv = RatFunc.var(p)
    A = span([as_ratfunc(g) for g in A0_gens], QQ)
    chain = [A]
    guard = A.dim + 1
    while A.dim:
        if len(chain) > guard:
            raise ChainError(f"descent exceeded {guard} steps")
        nxt = intersect(A, A.scale(1 / pv))
        if nxt.dim == A.dim:
            raise ChainError("nonzero subspace is stable under multiplication by p")
        chain.append(nxt)
        A = nxt
    qp = Field.of(p)
    steps, qp_steps = [], []
    for a, b in zip(chain, chain[1:]):
        mid = _plus_p_multiple(b, pv).elements()
        steps.append(ldim(QQ, a.elements(), mid))
        qp_steps.append(ldim(qp, a.elements(), mid))
    lhs = ldim(QQ, chain[0].elements(), chain[1].elements()) if len(chain) > 1 else 0
    return ChainCertificate(p, chain, [c.dim for c in chain], steps, qp_steps, lhs,
                            ldim(qp, list(A0_gens)))


def telescoping_check(cert):
    """Recompute the telescoping identity and each step identity from the bases."""
    pv = RatFunc.var(cert.p)
    qp = Field.of(cert.p)
    chain = cert.chain + [span([], QQ)]
    if cert.dims[-1] != 0 or chain[-2].dim != 0:
        raise TelescopingError(len(cert.chain) - 1, "chain does not end at {0}")
    total = 0
    for i in range(len(cert.chain) - 1):
        a, b, c = (chain[i + j].elements() for j in range(3))
        if cert.dims[i + 1] >= cert.dims[i]:
            raise TelescopingError(i, f"dims not decreasing: {cert.dims[i]} -> {cert.dims[i + 1]}")
        mid = _plus_p_multiple(chain[i + 1], pv).elements()
        if not span_ops("equal", span(a + mid), chain[i]):
            raise TelescopingError(i, "A_{i+1} + p A_{i+1} is not inside A_i")
        term = ldim(QQ, a, mid)
        if term != cert.step_terms[i]:
            raise TelescopingError(i, f"stored step term {cert.step_terms[i]}, recomputed {term}")
        if ldim(QQ, a, b) != term + ldim(QQ, b, c):
            raise TelescopingError(i, "ldim(A_i/A_i+1) != step term + ldim(A_i+1/A_i+2)")
        qp_term = ldim(qp, a, mid)
        if qp_term > term or qp_term != ldim(qp, a, b):
            raise TelescopingError(i, "step domination by the Q(p)-quotient fails")
        total += term
    lhs = ldim(QQ, chain[0].elements(), chain[1].elements())
    if lhs != cert.telescoping_lhs or lhs != total:
        raise TelescopingError(len(cert.chain) - 1,
                               f"ldim(A_0/A_1) = {lhs} but the step terms sum to {total}")
    return True


@dataclass
class PowerInequalityReport:
    x: list
    k: list
    p: str
    certificate: ChainCertificate
    quotient: tuple
    kernel_shift: tuple
    reduction: tuple
    final: tuple
    failures: list = field(default_factory=list)

    @property
    def holds(self):
        return not self.failures

    def values(self):
        out = {"quotient.lhs": self.quotient[0], "quotient.rhs": self.quotient[1]}
        out.update({f"kernel_shift.{i}": v for i, v in enumerate(self.kernel_shift)})
        out.update({f"reduction.L{i}": v for i, v in enumerate(self.reduction)})
        out["final.lhs"], out["final.rhs"] = self.final
        return out


def power_inequality_check(x, kernel_gens=(), p="p"):
    """Evaluate every quantity in the reduction of
    ``ldim_Q(p x / x, k) >= ldim_Q(p)(x / k)`` to the descent chain."""
    pv = RatFunc.var(p)
    qp = Field.of(p)
    x = [as_ratfunc(e) for e in x]
    k = [as_ratfunc(e) for e in kernel_gens]
    if any(p in e.variables for e in k):
        raise ValueError("kernel generators must not involve the power variable")
    px = [pv * e for e in x]
    pinv_k = [e / pv for e in k]

    cert = chain_descent(px + k, p)
    failures = []
    try:
        telescoping_check(cert)
    except TelescopingError as exc:
        failures.append(f"telescoping: {exc}")

    quotient = (ldim(QQ, px + k, x + pinv_k), ldim(qp, x + pinv_k))
    if quotient[0] != cert.telescoping_lhs:
        failures.append("quotient: lhs differs from ldim(A_0/A_1)")
    if quotient[1] != cert.qp_dim:
        failures.append("quotient: rhs differs from ldim_Q(p)(A_0)")
    if quotient[0] < quotient[1]:
        failures.append("quotient: inequality fails")

    shift = (ldim(qp, x + pinv_k), ldim(qp, x + k), ldim(qp, x, k) + ldim(qp, k))
    if len(set(shift)) != 1:
        failures.append("kernel shift: equalities fail")

    base = ldim(QQ, px, k + x)
    chain = (quotient[0], ldim(QQ, px + k, x), base + ldim(QQ, k, x), base + ldim(QQ, k),
             base + ldim(qp, k))
    if not (chain[0] <= chain[1] == chain[2] <= chain[3] == chain[4]):
        failures.append("reduction: chain of (in)equalities fails")

    final = (ldim(QQ, px, x + k), ldim(qp, x, k))
    if final[0] < final[1]:
        failures.append("final inequality fails")
    return PowerInequalityReport(x, k, p, cert, quotient, shift, chain, final, failures)
