"""Verification suites shared by the command line and the test-suite.

``paper`` runs the nine acceptance checks, ``oracles`` only the
brute-force equivalence checks. Each check returns a CheckResult carrying
the numbers it looked at.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from .core import PairContext, prefix_project
from .norms import catalog_ids, get_norm, norm
from .oracles import compare_greedy, compare_norm, has_suprema, oracle_library
from .parameters import (conservative_constant, dual_coordinate_norm, lebesgue_parameter, omega_parameter,
                         quasi_greedy_parameters, sc_parameter, verify_lebesgue_bounds)
from .properties import (Weight, alternating_vector, c0_subsequence_probe, check_unit_symmetry,
                         divergence_report, schauder_constant)

EXACT = 1e-9


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    details: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.key}: {self.title} ({self.seconds:.1f}s)"


def _close(a: float, b: float, tol: float = EXACT) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def check_summing_omega() -> Tuple[bool, List[str]]:
    spec = get_norm("summing")
    ok, out = True, []
    t0 = time.perf_counter()
    for m, want in ((1, 5.0), (2, 9.0), (3, 13.0)):
        r = omega_parameter(spec, m)
        ok &= _close(r.value, want)
        out.append(f"omega m={m}: {r.value!r} (want {want})")
    leb = lebesgue_parameter(spec, 1).value
    om1 = omega_parameter(spec, 1).value
    ok &= _close(leb, om1)
    out.append(f"lebesgue m=1: {leb!r}, omega m=1: {om1!r}")
    dt = time.perf_counter() - t0
    ok &= dt < 5
    out.append(f"runtime {dt:.2f}s (limit 5s)")
    return ok, out


def check_split_parameters() -> Tuple[bool, List[str]]:
    spec = get_norm("split")
    window = spec.n.element(14)
    ok, out = True, []
    t0 = time.perf_counter()
    for m in (1, 2, 3):
        for order in (2 * m - 1, 2 * m):
            sc = sc_parameter(spec, order, window).value
            leb = lebesgue_parameter(spec, order).value
            ok &= _close(sc, m) and leb >= (m + 1) / (1 + 1e-6)
            out.append(f"order {order}: sc={sc!r} (want {m}), lebesgue>={leb!r} (want >= {m + 1}/(1+1e-6))")
    q = quasi_greedy_parameters(spec, 3)
    trip = tuple(q[k].value for k in ("g", "gc", "gtilde"))
    ok &= all(_close(v, 1.0) for v in trip)
    out.append(f"quasi-greedy (g, gc, gtilde) = {trip}")
    rep = verify_lebesgue_bounds(spec, 6, sc_window=window)
    ok &= rep.ok and all(rep.tight.values())
    out.append(f"bounds ok={rep.ok}, tight={rep.tight}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    out.append(f"runtime {dt:.2f}s (limit 60s)")
    return ok, out


def check_l1l2_conservative() -> Tuple[bool, List[str]]:
    r = conservative_constant(get_norm("l1l2"), 20, 6, cls="T_n", signs=True)
    return r.value == 1.0, [f"conservative constant window 20 caps 6: {r.value!r} ({r.kind})"]


def check_summing_duals() -> Tuple[bool, List[str]]:
    spec = get_norm("summing")
    n = spec.n
    ok, out = True, []
    targets = [(k, 1.0, "off n") for k in (1, 3, 5)]
    targets += [(n.element(1), 1.0, "n_1")]
    targets += [(n.element(s), 2.0, f"n_{s}") for s in range(2, 9)]
    for k, want, label in targets:
        r = dual_coordinate_norm(spec, k)
        good = _close(r.value, want) and r.reference is not None and _close(r.reference, want)
        ok &= good
        out.append(f"dual at {k} ({label}): {r.value!r}, closed form {r.reference!r}")
    return ok, out


def check_divergence() -> Tuple[bool, List[str]]:
    out = []
    m2 = divergence_report(get_norm("m2"), "off_vs_on", [16, 64, 256])
    exact = [N / math.fsum(i ** -0.5 for i in range(1, N + 1)) for N in (16, 64, 256)]
    match = all(_close(r[3], e) for r, e in zip(m2.rows, exact))
    m2_ok = match and m2.growth >= 4
    out.append("m2 ratios " + ", ".join(f"N={r[0]}: {r[3]:.6f}" for r in m2.rows)
               + f"; growth {m2.growth:.4f} (need >= 4); matches N/sum i^-1/2: {match}")
    m3 = divergence_report(get_norm("m3"), "tail_vs_head", [16, 64, 256])
    m3_ok = m3.growth >= 2
    out.append("m3 ratios " + ", ".join(f"N={r[0]}: {r[3]:.6f}" for r in m3.rows)
               + f"; growth {m3.growth:.4f} (need >= 2)")
    return m2_ok and m3_ok, out


def check_oracles() -> Tuple[bool, List[str]]:
    lib = oracle_library()
    ok, out = True, []
    for nid in catalog_ids():
        spec = get_norm(nid)
        if not has_suprema(spec):
            continue
        bad = compare_norm(spec, lib)
        ok &= bad is None
        out.append(f"{nid}: " + ("agrees on 500 vectors" if bad is None else
                                 f"disagrees at {bad[0].to_literal()}: {bad[1]!r} vs oracle {bad[2]!r}"))
    bad = compare_greedy(lib, 14, 4)
    ok &= bad is None
    out.append("greedy sets: " + ("agree on window 14, m <= 4" if bad is None else f"disagree at {bad[0]} m={bad[1]}"))
    return ok, out


def check_pslc() -> Tuple[bool, List[str]]:
    ok, out = True, []
    for nid in ("m3", "m8_case2", "l1l2"):
        r = check_unit_symmetry(get_norm(nid), "PSLC_p10")
        ok &= r.passed
        out.append(f"{nid}: passed={r.passed} after {r.checked} instances")
    r = check_unit_symmetry(get_norm("m4"), "PSLC_p10")
    c = r.counterexample or {}
    verbatim = (not r.passed and _close(c.get("lhs", 0), 2.0, 1e-12)
                and _close(c.get("rhs", 0), 1 + 1 / math.sqrt(2), 1e-12))
    ok &= verbatim
    out.append(f"m4: passed={r.passed}, counterexample x+e_j vs x+e_k with x=e_{c.get('x').support[0] if c else '?'},"
               f" j={c.get('j')}, k={c.get('k')}: {c.get('lhs')!r} vs {c.get('rhs')!r}")
    return ok, out


def check_n_schauder() -> Tuple[bool, List[str]]:
    spec = get_norm("e112")
    ok, out = True, []
    for k in range(1, 9):
        x = alternating_vector(spec.seq("m"), 2 * k)
        top = spec.n.count_upto(x.support[-1])
        ratio = max(norm(prefix_project(x, spec.n, j), spec) for j in range(1, top + 1)) / norm(x, spec)
        ok &= _close(ratio, k)
        out.append(f"x_{2 * k}: P^n ratio {ratio!r} (want {k})")
    s = schauder_constant(spec)
    ok &= s.value <= 1 + EXACT
    out.append(f"prefix projection ratio over the library: {s.value!r} (want <= 1)")
    return ok, out


def check_weights() -> Tuple[bool, List[str]]:
    spec = get_norm("m14")
    w = Weight.norm_induced(spec)
    r = conservative_constant(spec, 24, 4, cls="T_omega_n", ctx=PairContext(n=spec.n, weight=w))
    ok = r.value == 1.0
    out = [f"T_omega conservative constant window 24 caps 4: {r.value!r}"]
    c0 = c0_subsequence_probe(spec, spec.n, [4, 16, 64])
    for N, v in zip(c0.sizes, c0.values):
        ok &= v >= math.sqrt(N)
        out.append(f"N={N}: {v!r} (want >= {math.sqrt(N)})")
    out.append(f"verdict {c0.verdict}")
    return ok, out


CRITERIA: Dict[str, Tuple[str, Callable[[], Tuple[bool, List[str]]]]] = {
    "criterion-1": ("summing norm omega = 1 + 4m and lebesgue m=1", check_summing_omega),
    "criterion-2": ("split norm sc, lebesgue, quasi-greedy and tight bounds", check_split_parameters),
    "criterion-3": ("l1+l2 conservative constant 1", check_l1l2_conservative),
    "criterion-4": ("summing norm coordinate functionals", check_summing_duals),
    "criterion-5": ("divergence of the m2 and m3 ratios", check_divergence),
    "criterion-6": ("evaluators agree with brute-force oracles", check_oracles),
    "criterion-7": ("pointwise 1-PSLC instances and the m4 counterexample", check_pslc),
    "criterion-8": ("n-Schauder separation for e112", check_n_schauder),
    "criterion-9": ("norm-induced weight and c0 probe for m14", check_weights),
}

SUITES = {
    "paper": list(CRITERIA),
    "oracles": ["criterion-6"],
}


def run_check(key: str) -> CheckResult:
    title, fn = CRITERIA[key]
    t0 = time.perf_counter()
    passed, details = fn()
    return CheckResult(key, title, bool(passed), details, time.perf_counter() - t0)


def run_suite(name: str) -> List[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return [run_check(k) for k in SUITES[name]]
