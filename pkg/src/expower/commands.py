"""Run instance-file sections and turn the results into report sections."""

import time

from .arith import QQ, Field, RatFunc
from .chain import chain_descent, power_inequality_check, telescoping_check, TelescopingError
from .instance import parse_instance
from .mulind import mult_independence
from .report import CheckResult, SectionResult
from .expseries import ExpPolynomial, TruncatedSeries, expalg_witness
from .subspace import disjointness_check, ldim
from .verify import (FAIL, INCONCLUSIVE, PASS, TruncationTooSmall, ax_check,
                     etpower_check, powers_sc_check, relation_search)

COMMAND_KINDS = {
    "mulind": ("mulind",),
    "ldim": ("ldim", "disjoint"),
    "chain": ("chain",),
    "ax": ("ax",),
    "expalg": ("expalg",),
    "relsearch": ("relsearch",),
    "verify-powers": ("powers",),
    "all": ("mulind", "ldim", "disjoint", "chain", "ax", "powers", "expalg", "relsearch"),
}


def _src(section, key):
    """Input expressions as written in the file."""
    return section.data["source"].get(key, ()) or "-"


def _exact(ok):
    return PASS if ok else FAIL


def _expect(result, section, actual):
    want = section.data.get("expect")
    if want is not None:
        result.checks.append(CheckResult("expected", _exact(want == actual),
                                         f"expected {want}, got {actual}"))


def run_mulind(section, result):
    res = mult_independence(section.data["y"])
    result.values.update({
        "n": len(res.values), "y": tuple(res.values),
        "result": "independent" if res.independent else "dependent",
        "primes": tuple(res.primes) or "-",
        "relation": res.relation if res.relation else "-",
    })
    result.certificates["exponents"] = [",".join(map(str, row)) for row in res.exponents]
    result.checks.append(CheckResult(
        "relation_verified", _exact(res.verify()),
        "prod y_i^m_i = 1 recomputed exactly" if res.relation else "exponent rows independent"))
    _expect(result, section, result.values["result"])


def _field(params):
    return Field(params) if params else QQ


def run_ldim(section, result):
    d = section.data
    K = _field(d["K"])
    value = ldim(K, d["X"], d["Y"], d["ker"])
    base = list(reversed(d["Y"] + d["ker"]))
    # independent recomputation: rank of everything minus rank of the base, reordered
    again = ldim(K, list(reversed(d["X"])) + base) - (ldim(K, base) if base else 0)
    result.values.update({"K": "Q(" + ",".join(d["K"]) + ")" if d["K"] else "Q",
                          "X": _src(section, "X"), "Y": _src(section, "Y"),
                          "ker": _src(section, "ker"), "ldim": value})
    result.checks.append(CheckResult("recomputed", _exact(value == again),
                                     f"rank difference on reordered input = {again}"))
    _expect(result, section, value)


def run_disjoint(section, result):
    d = section.data
    res = disjointness_check(d["K"], d["L"], d["samples"], d["seed"])
    result.values.update({"K": _src(section, "K"), "L": _src(section, "L"),
                          "result": res.verdict})
    if res.verdict == "counterexample":
        K = Field(tuple(sorted({v for g in d["K"] for v in g.variables})))
        dk, de = ldim(K, list(res.tuple)), ldim(QQ, list(res.tuple))
        result.values["tuple"] = tuple(map(str, res.tuple))
        result.values["ldim_K"], result.values["ldim_E"] = dk, de
        result.checks.append(CheckResult("counterexample_verified", _exact(dk < de),
                                         f"ldim over K {dk} < ldim over Q {de}"))
    elif res.verdict == "disjoint_by_criterion":
        result.checks.append(CheckResult("criterion", PASS,
                                         "generators of K and L share no variable"))
    else:
        result.checks.append(CheckResult("decided", INCONCLUSIVE,
                                         "no criterion applies and no counterexample was found"))
    _expect(result, section, res.verdict)


def run_chain(section, result):
    d = section.data
    p = d["p"]
    pv = RatFunc.var(p)
    x, k = d["x"], d["k"]
    cert = chain_descent([pv * e for e in x] + x + k, p)
    result.values.update({"p": p, "x": _src(section, "x"), "k": _src(section, "k")})
    result.values.update({f"chain.{key}": v for key, v in cert.summary().items()})
    try:
        telescoping_check(cert)
        result.checks.append(CheckResult("telescoping", PASS, "recomputed from the chain bases"))
    except TelescopingError as exc:
        result.checks.append(CheckResult("telescoping", FAIL, str(exc)))
    result.certificates["chain"] = [
        "; ".join(str(b) for b in A.elements()) or "0" for A in cert.chain]
    ineq = power_inequality_check(x, k, p)
    result.values.update({f"inequality.{key}": v for key, v in ineq.values().items()})
    result.values["inequality.dims"] = tuple(ineq.certificate.dims)
    result.checks.append(CheckResult("power_inequality", _exact(ineq.holds),
                                     "; ".join(ineq.failures) or
                                     f"{ineq.final[0]} >= {ineq.final[1]}"))
    if "dims" in d:
        result.checks.append(CheckResult("expected", _exact(tuple(cert.dims) == d["dims"]),
                                         f"expected dims {d['dims']}, got {tuple(cert.dims)}"))


def _verifier_result(report, result):
    result.values.update(report.values)
    result.checks += [CheckResult(c.name, c.verdict, c.detail) for c in report.checks]
    for name, cert in report.certificates.items():
        result.certificates[name] = [str(r) for r in cert.relations] or ["none"]
    result.notes += report.notes


def run_ax(section, result):
    d = section.data
    report = ax_check(d["z"], d["D"], d["T"], d["variables"], d["seed"])
    result.values["z"] = _src(section, "z")
    _verifier_result(report, result)


def run_powers(section, result):
    d = section.data
    if d["mode"] == "etpower":
        report = etpower_check(d["x"], d["ker"], d["D"], d["T"], d["variables"], d["p"], d["seed"])
        result.values["x"] = _src(section, "x")
    else:
        report = powers_sc_check(d["z"], d["ker"], d["D"], d["T"], d["variables"], d["seed"])
        result.values["z"] = _src(section, "z")
    result.values["mode"] = d["mode"]
    _verifier_result(report, result)


def _as_series(x, variables, order, fld=QQ):
    if isinstance(x, TruncatedSeries):
        return x
    return TruncatedSeries.from_ratfunc(x, variables, order, fld)


def run_expalg(section, result):
    d = section.data
    n = len(d["f"])
    fs = [ExpPolynomial(n, f) for f in d["f"]]
    xs = [_as_series(x, d["variables"], d["T"]) for x in d["x"]]
    res = expalg_witness(fs, xs, d["total"])
    holds = "holds" if res.holds else "fails"
    result.values.update({
        "n": n, "f": tuple(map(str, fs)), "x": _src(section, "x"),
        "derivative": "total" if d["total"] else "partial_in_x",
        "values_vanish": res.vanishes, "jacobian_det": str(res.jacobian_det),
        "result": holds,
    })
    result.certificates["jacobian"] = ["; ".join(str(e) for e in row) for row in res.jacobian]
    result.checks.append(CheckResult("expected", _exact(holds == d["expect"]),
                                     f"expected {d['expect']}, got {holds}"))


def run_relsearch(section, result):
    d = section.data
    gens = [_as_series(g, d["variables"], d["T"], d["field"]) for g in d["g"]]
    names = tuple(f"g{i}" for i in range(1, len(gens) + 1))
    cert = relation_search(gens, d["D"], names, d["seed"])
    result.values.update({
        "g": _src(section, "g"), "degree_bound": d["D"], "truncation": cert.truncation,
        "outcome": cert.describe(), "kernel_dimension": cert.kernel_dimension,
        "td_estimate": cert.td.value, "td_kind": cert.td.kind, "td_previous": cert.td.previous,
        "stable": cert.td.stable,
    })
    result.certificates["relations"] = [str(r) for r in cert.relations] or ["none"]
    result.checks.append(CheckResult(
        "relations_verified", PASS if cert.verified else INCONCLUSIVE,
        "every relation re-evaluates to zero" if cert.verified else
        "a relation fails an independent re-evaluation; raise the truncation"))
    result.checks.append(CheckResult("td_stable", PASS if cert.td.stable else INCONCLUSIVE,
                                     cert.stability()))


RUNNERS = {
    "mulind": run_mulind, "ldim": run_ldim, "disjoint": run_disjoint, "chain": run_chain,
    "ax": run_ax, "powers": run_powers, "expalg": run_expalg, "relsearch": run_relsearch,
}


def apply_overrides(section, overrides):
    for key in ("D", "T", "seed"):
        if overrides.get(key) is not None:
            section.data[key] = overrides[key]


def run_section(section, overrides=None):
    """Run one parsed section; exceptions become an ERROR result."""
    apply_overrides(section, overrides or {})
    result = SectionResult(section.kind, section.index, section.line)
    start = time.perf_counter()
    try:
        RUNNERS[section.kind](section, result)
    except (ValueError, ArithmeticError, TruncationTooSmall) as exc:
        result.error = f"{type(exc).__name__}: {exc}"
    result.seconds = time.perf_counter() - start
    return result


def _worker(args):
    text, position, overrides = args
    return run_section(parse_instance(text).sections[position], overrides)


def run_file(instance, command, overrides=None, parallel=1):
    """Run every section relevant to ``command`` in declaration order."""
    kinds = COMMAND_KINDS[command]
    chosen = [i for i, s in enumerate(instance.sections) if s.kind in kinds]
    overrides = overrides or {}
    if parallel > 1 and len(chosen) > 1:
        from concurrent.futures import ProcessPoolExecutor

        # workers re-parse the text, so nothing but strings crosses processes
        jobs = [(instance.text, pos, overrides) for pos in chosen]
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_worker, jobs))
    return [run_section(instance.sections[pos], overrides) for pos in chosen]

