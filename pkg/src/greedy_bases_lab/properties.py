"""Desk-scale checks of qualitative basis properties.

Pointwise symmetry conditions, divergence tables, projection constants,
gap classification, right-skewness, weights and c0-type probes. Results
carry the raw numbers so that no limit claim hides inside a boolean.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .core import IndexSequence, PairContext, SparseVector, classify_pair, indicator, prefix_project, project, set_less, subsets_upto
from .greedy import greedy_sets
from .norms import NormSpec, norm

SEED = 0x5EED
TOL = 1e-9

EXIT_PASS, EXIT_VIOLATION, EXIT_INFEASIBLE = 0, 1, 2

VARIANTS = ("PSLC_p10", "SLC_ee10", "RSLC", "AG_ee13")


# ---------------------------------------------------------------------------
# weights


class Weight:
    """Weight on finite sets with weight(empty) = 0.

    kinds: ``sequence`` (sum of positive per-index values), ``norm_induced``
    (norm of the indicator), ``table`` (explicit values on listed sets).
    """

    def __init__(self, kind: str, source):
        if kind not in ("sequence", "norm_induced", "table"):
            raise ValueError(f"unknown weight kind {kind!r}")
        self.kind = kind
        self.source = source
        self._cache: Dict[FrozenSet[int], float] = {}

    @classmethod
    def from_sequence(cls, values: Callable[[int], float]) -> "Weight":
        return cls("sequence", values)

    @classmethod
    def norm_induced(cls, spec: NormSpec) -> "Weight":
        return cls("norm_induced", spec)

    @classmethod
    def from_table(cls, table: Mapping[FrozenSet[int], float]) -> "Weight":
        return cls("table", dict(table))

    def __call__(self, A: Iterable[int]) -> float:
        A = frozenset(A)
        if not A:
            return 0.0
        if A in self._cache:
            return self._cache[A]
        if self.kind == "sequence":
            vals = [float(self.source(i)) for i in A]
            if any(not v > 0 for v in vals):
                raise ValueError("sequence weights must be positive")
            v = math.fsum(vals)
        elif self.kind == "norm_induced":
            v = norm(indicator(A), self.source)
        else:
            v = float(self.source.get(A, math.inf))
        self._cache[A] = v
        return v

    def window_limsup(self, window: int) -> float:
        """max of the singleton weights over the last half of [1, window]."""
        return max(self({i}) for i in range(window // 2 + 1, window + 1))


def weight_admissibility(weight: Weight, n: IndexSequence, A: Iterable[int], B: Iterable[int]):
    """Membership of (A, B) in the weighted class; returns (bool, classified pair)."""
    pair = classify_pair(A, B, PairContext(n=n, weight=weight))
    return "T_omega_n" in pair.classes, pair


# ---------------------------------------------------------------------------
# pointwise symmetry conditions


@dataclass(frozen=True)
class SampleConfig:
    window: int = 10
    max_support: int = 5
    levels: Tuple[float, ...] = (0.25, 0.5, 1.0)
    random_per_support: int = 2
    seed: int = SEED
    # extra indices beyond the window used for j, k
    margin: int = 2
    # set sizes for the RSLC check
    max_set: int = 2


@dataclass
class SymmetryReport:
    variant: str
    norm_id: str
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_VIOLATION


def sample_vectors(cfg: SampleConfig) -> Iterator[SparseVector]:
    """Deterministic library: uniform levels, alternating signs and seeded random patterns."""
    rng = random.Random(cfg.seed)
    idx = tuple(range(1, cfg.window + 1))
    for S in subsets_upto(idx, cfg.max_support):
        if not S:
            yield SparseVector.zero()
            continue
        seen = set()
        pats = [tuple(L for _ in S) for L in cfg.levels]
        pats.append(tuple(cfg.levels[-1] * (-1) ** r for r in range(len(S))))
        for _ in range(cfg.random_per_support):
            pats.append(tuple(rng.choice(cfg.levels) * rng.choice((1, -1)) for _ in S))
        for p in pats:
            if p not in seen:
                seen.add(p)
                yield SparseVector(zip(S, p))


def known_instances(spec: NormSpec, variant: str) -> List[dict]:
    """Known extremal instances placed ahead of the sampled library."""
    out = []
    if spec.id == "m4" and variant == "PSLC_p10":
        d = spec.seq("d")
        m = spec.seq("m")
        i0 = next(i for i in m.elements_upto(10**4) if i in spec.n)
        n1, n2 = d.element(4), d.element(5)
        out.append({"x": SparseVector.unit(n1), "j": i0, "k": n2, "s": 1, "t": 1})
    return out


def _within(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + TOL * max(1.0, abs(rhs))


def _unit_instance(spec: NormSpec, variant: str, inst: dict) -> Tuple[bool, float, float]:
    x, j, k, s, t = inst["x"], inst["j"], inst["k"], inst["s"], inst["t"]
    lhs = norm(x + SparseVector.unit(j, s), spec)
    rhs = norm(x + SparseVector.unit(k, t), spec)
    return _within(lhs, rhs), lhs, rhs


def _unit_admissible(variant: str, n: IndexSequence, x: SparseVector, j: int, k: int) -> bool:
    supp = set(x.support)
    if j not in n or j == k or j in supp or k in supp:
        return False
    if variant == "PSLC_p10":
        return set_less([j], [i for i in list(supp) + [k] if i in n])
    return True


def _check_pointwise(spec, variant, n, cfg) -> SymmetryReport:
    checked = 0
    for inst in known_instances(spec, variant):
        ok, lhs, rhs = _unit_instance(spec, variant, inst)
        checked += 1
        if not ok:
            return SymmetryReport(variant, spec.id, False, checked, dict(inst, lhs=lhs, rhs=rhs, condition="pair"))
    universe = range(1, cfg.window + cfg.margin + 1)
    for x in sample_vectors(cfg):
        supp = set(x.support)
        free = [i for i in universe if i not in supp]
        vals = {(i, t): norm(x + SparseVector.unit(i, t), spec) for i in free for t in (1, -1)}
        if variant == "PSLC_p10":
            base = norm(x, spec)
            for k in free:
                checked += 1
                if not _within(base, vals[(k, 1)]):
                    return SymmetryReport(variant, spec.id, False, checked,
                                          {"x": x, "k": k, "lhs": base, "rhs": vals[(k, 1)], "condition": "add"})
        for j in free:
            if j not in n:
                continue
            for k in free:
                if not _unit_admissible(variant, n, x, j, k):
                    continue
                for s, t in itertools.product((1, -1), repeat=2):
                    checked += 1
                    if not _within(vals[(j, s)], vals[(k, t)]):
                        return SymmetryReport(variant, spec.id, False, checked,
                                              {"x": x, "j": j, "k": k, "s": s, "t": t, "lhs": vals[(j, s)],
                                               "rhs": vals[(k, t)], "condition": "pair"})
    return SymmetryReport(variant, spec.id, True, checked)


def _check_ag(spec, n, cfg) -> SymmetryReport:
    checked = 0
    universe = range(1, cfg.window + cfg.margin + 1)
    for x in sample_vectors(cfg):
        if not x:
            continue
        lhs = max(norm(x - project(x, G), spec) for G in greedy_sets(x, 1).sets)
        for j in universe:
            if j not in n:
                continue
            checked += 1
            rhs = norm(x - project(x, [j]), spec)
            if not _within(lhs, rhs):
                return SymmetryReport("AG_ee13", spec.id, False, checked, {"x": x, "j": j, "lhs": lhs, "rhs": rhs})
    return SymmetryReport("AG_ee13", spec.id, True, checked)


def rslc_admissible(n: IndexSequence, x: SparseVector, A: Sequence[int], B: Sequence[int]) -> bool:
    # (A, B) in S(n), B disjoint from supp x, and A precedes the part of
    # (supp x + B) inside n lying at or above min A
    if any(a not in n for a in A) or len(A) > len(B):
        return False
    supp = set(x.support)
    if supp & set(B) or supp & set(A) or set(A) & set(B):
        return False
    if not A:
        return True
    lo = min(A)
    rest = [i for i in list(supp) + list(B) if i in n and i >= lo]
    return set_less(A, rest)


def _check_rslc(spec, n, cfg) -> SymmetryReport:
    checked = 0
    small = SampleConfig(window=min(cfg.window, 6), max_support=min(cfg.max_support, 3), levels=cfg.levels,
                         random_per_support=1, seed=cfg.seed)
    universe = tuple(range(1, small.window + cfg.margin + 1))
    for x in sample_vectors(small):
        supp = set(x.support)
        free = [i for i in universe if i not in supp]
        sets = list(subsets_upto(free, cfg.max_set))
        hi, lo = {}, {}
        for S in sets:
            vals = []
            for e in itertools.product((1, -1), repeat=len(S)):
                vals.append(norm(x + indicator(S, dict(zip(S, e))), spec))
            hi[S], lo[S] = max(vals), min(vals)
        for A in sets:
            for B in sets:
                if not rslc_admissible(n, x, A, B):
                    continue
                checked += 1
                if not _within(hi[A], lo[B]):
                    return SymmetryReport("RSLC", spec.id, False, checked,
                                          {"x": x, "A": A, "B": B, "lhs": hi[A], "rhs": lo[B]})
    return SymmetryReport("RSLC", spec.id, True, checked)


def check_unit_symmetry(spec: NormSpec, variant: str, cfg: SampleConfig = SampleConfig(),
                        n: Optional[IndexSequence] = None) -> SymmetryReport:
    """Check a pointwise symmetry condition with constant 1 on the sample library.

    The first violation (library order, known instances first) is returned.
    """
    n = n or spec.n
    if variant in ("PSLC_p10", "SLC_ee10"):
        return _check_pointwise(spec, variant, n, cfg)
    if variant == "AG_ee13":
        return _check_ag(spec, n, cfg)
    if variant == "RSLC":
        return _check_rslc(spec, n, cfg)
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# divergence tables


def _family_off_vs_on(spec: NormSpec, N: int):
    n = spec.n
    off = []
    j = 1
    while len(off) < N:
        if j not in n:
            off.append(j)
        j += 1
    k = n.count_upto(off[-1])
    on = [n.element(k + i) for i in range(1, N + 1)]
    return off, on


def _family_tail_vs_head(spec: NormSpec, N: int, name: str = "n"):
    seq = spec.seq(name)
    return [seq.element(N * N + i) for i in range(1, N + 1)], [seq.element(i) for i in range(1, N + 1)]


def _family_m_tail_vs_d_head(spec: NormSpec, N: int):
    m, d = spec.seq("m"), spec.seq("d")
    return [m.element(N * N + i) for i in range(1, N + 1)], [d.element(i) for i in range(1, N + 1)]


def _family_lambda(spec: NormSpec, N: int):
    sub = spec.seq("n_prime")
    A = [sub.element(i) for i in range(1, N + 1)]
    B, j = [], A[-1] + 1
    while len(B) < N:
        if j in spec.n and j not in sub:
            B.append(j)
        j += 1
    return A, B


WITNESS_FAMILIES: Dict[str, Callable] = {
    "off_vs_on": _family_off_vs_on,
    "tail_vs_head": _family_tail_vs_head,
    "m_tail_vs_d_head": _family_m_tail_vs_d_head,
    "lambda_head_vs_rest": _family_lambda,
}


@dataclass
class DivergenceReport:
    norm_id: str
    family: str
    rows: List[Tuple[int, float, float, float]]  # N, ||1_D||, ||1_E||, ratio
    growth: float
    growing: bool


def divergence_report(spec: NormSpec, family: Union[str, Callable], N_list: Sequence[int]) -> DivergenceReport:
    """Ratios ||1_D|| / ||1_E|| along a witness family; growing means factor >= 2."""
    fn = WITNESS_FAMILIES[family] if isinstance(family, str) else family
    rows = []
    for N in N_list:
        D, E = fn(spec, N)
        a, b = norm(indicator(D), spec), norm(indicator(E), spec)
        rows.append((N, a, b, a / b))
    growth = rows[-1][3] / rows[0][3]
    name = family if isinstance(family, str) else getattr(family, "__name__", "custom")
    return DivergenceReport(spec.id, name, rows, growth, growth >= 2.0)


# ---------------------------------------------------------------------------
# projection constants


@dataclass
class ProjectionReport:
    norm_id: str
    value: float
    witness: Optional[dict]
    rows: List[Tuple[str, int, float]] = field(default_factory=list)


def alternating_vector(seq: IndexSequence, count: int) -> SparseVector:
    """sum over i <= count of (-1)^i e_{seq_i}."""
    return SparseVector({seq.element(i): (-1.0) ** i for i in range(1, count + 1)})


def _schauder_library(spec: NormSpec, window: int, cfg: SampleConfig) -> List[SparseVector]:
    lib = []
    if spec.family == "summing" and "sum_seq" in spec.params:
        m = spec.seq(spec.params["sum_seq"])
        lib += [alternating_vector(m, 2 * k) for k in range(1, 9)]
    lib += [alternating_vector(spec.n, k) for k in range(1, 7)]
    rng = random.Random(cfg.seed)
    for _ in range(100):
        size = rng.randint(1, min(6, window))
        S = rng.sample(range(1, window + 1), size)
        lib.append(SparseVector({i: rng.choice(cfg.levels) * rng.choice((1, -1)) for i in S}))
    return lib


def n_schauder_constant(spec: NormSpec, window: int = 40, cfg: SampleConfig = SampleConfig(),
                        n: Optional[IndexSequence] = None, extra: Iterable[SparseVector] = ()) -> ProjectionReport:
    """Lower bound for sup ||P^n_m x|| / ||x|| over the library."""
    n = n or spec.n
    best, wit, rows = 0.0, None, []
    for x in list(extra) + _schauder_library(spec, window, cfg):
        nx = norm(x, spec)
        if nx == 0:
            continue
        top = n.count_upto(x.support[-1])
        r_best = 0.0
        for m in range(1, top + 1):
            p = prefix_project(x, n, m)
            r = norm(p, spec) / nx
            r_best = max(r_best, r)
            if r > best:
                best, wit = r, {"x": x, "m": m, "num": p, "den": x}
        rows.append((x.to_literal(), top, r_best))
    return ProjectionReport(spec.id, best, wit, rows)


def schauder_constant(spec: NormSpec, window: int = 40, cfg: SampleConfig = SampleConfig(),
                      extra: Iterable[SparseVector] = ()) -> ProjectionReport:
    """Lower bound for sup ||P_{1..m} x|| / ||x|| (natural-order partial sums)."""
    best, wit = 0.0, None
    for x in list(extra) + _schauder_library(spec, window, cfg):
        nx = norm(x, spec)
        if nx == 0:
            continue
        for m in x.support:
            p = x.restrict(lambda i: i <= m)
            r = norm(p, spec) / nx
            if r > best:
                best, wit = r, {"x": x, "m": m, "num": p, "den": x}
    return ProjectionReport(spec.id, best, wit)


# ---------------------------------------------------------------------------
# c0-type probe


@dataclass
class C0Report:
    norm_id: str
    sizes: List[int]
    values: List[float]
    verdict: str  # "bounded" or "growing" (desk-scale heuristic)


def c0_subsequence_probe(spec: NormSpec, subseq: IndexSequence, sizes: Sequence[int], signs: bool = True) -> C0Report:
    """max over signs of ||1_eA|| for A the first k elements of the subsequence."""
    vals = []
    for k in sizes:
        A = subseq.prefix(k)
        if spec.flags.sign_invariant or not signs:
            vals.append(norm(indicator(A), spec))
        elif k <= 12:
            vals.append(max(norm(indicator(A, dict(zip(A, e))), spec)
                            for e in itertools.product((1, -1), repeat=k)))
        else:
            raise ValueError("sign enumeration beyond 12 elements is not supported")
    plateau = vals[-1] <= 1.01 * vals[-2] if len(vals) > 1 else True
    return C0Report(spec.id, list(sizes), vals, "bounded" if plateau else "growing")


# ---------------------------------------------------------------------------
# gaps


@dataclass
class GapProfile:
    quotient_bound: float
    additive_bound: float
    quotient_at: Tuple[int, int]
    additive_at: Tuple[int, int]
    exact: bool
    flags: Tuple[str, ...] = ()


def gap_classifier(s: IndexSequence, window: int) -> GapProfile:
    els = s.elements_upto(window)
    if len(els) < 2:
        raise ValueError("need at least two elements inside the window")
    pairs = list(zip(els, els[1:]))
    q = max(pairs, key=lambda p: p[1] / p[0])
    a = max(pairs, key=lambda p: p[1] - p[0])
    qb, ab = q[1] / q[0], float(a[1] - a[0])
    flags = []
    doc = s.to_json()
    exact = doc["kind"] == "list" and (s.sup_bound() or 0) <= window
    if doc["kind"] == "arithmetic":
        exact = True
        flags.append("additive bound exact for the arithmetic rule")
    if doc.get("name") == "powers_of_2":
        qb, ab, exact = 2.0, math.inf, True
        flags.append("additive gaps arbitrarily large")
    return GapProfile(qb, ab, q, a, exact, tuple(flags))


# ---------------------------------------------------------------------------
# right-skewness


@dataclass
class SkewReport:
    norm_id: str
    passed: bool
    rows: List[Tuple[Tuple[int, ...], Optional[Tuple[int, ...]], float]]


def right_skewed_probe(spec: NormSpec, window: int, size_cap: int, c_target: float,
                       search_window: Optional[int] = None, exhaustive_cap: int = 20000) -> SkewReport:
    """For each A inside [1, window], look for B > A with |B| = |A| and ||1_B|| <= C ||1_A||."""
    top = search_window or 4 * window
    rows, ok = [], True
    for A in subsets_upto(tuple(range(1, window + 1)), size_cap):
        if not A:
            continue
        a = norm(indicator(A), spec)
        pool = list(range(max(A) + 1, top + 1))
        if len(pool) < len(A):
            raise ValueError("window too small to place B above A")
        cands = _structured_blocks(spec, A, pool)
        if math.comb(len(pool), len(A)) <= exhaustive_cap:
            cands = itertools.chain(cands, itertools.combinations(pool, len(A)))
        best, arg = math.inf, None
        for B in cands:
            r = norm(indicator(B), spec) / a
            if r < best:
                best, arg = r, tuple(B)
            if best <= c_target:
                break
        rows.append((A, arg, best))
        ok &= best <= c_target + TOL
    return SkewReport(spec.id, ok, rows)


def _structured_blocks(spec: NormSpec, A, pool) -> List[Tuple[int, ...]]:
    k = len(A)
    out = [tuple(pool[:k])]
    for name in spec.sequences:
        seq = spec.sequences[name]
        els = [i for i in pool if i in seq]
        if len(els) >= k:
            out.append(tuple(els[:k]))
    if "n_prime" in spec.sequences:
        sub = spec.seq("n_prime")
        els = [i for i in pool if i in spec.n and i not in sub]
        if len(els) >= k:
            out.insert(0, tuple(els[:k]))
    return out
