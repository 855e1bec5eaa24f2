"""Greedy sets with ties, truncation, reference errors and error profiles."""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .core import IndexSequence, InfeasibleEnumeration, SparseVector, complement_project, count_subsets, prefix_project
from .norms import NormSpec, norm

GREEDY_CAP = 10_000
REFERENCE_GUARD = 10**8


class GreedyOverflowError(InfeasibleEnumeration):
    pass


@dataclass(frozen=True)
class GreedySetFamily:
    m: int
    threshold: float
    sets: Tuple[FrozenSet[int], ...]
    padded: bool


def _window_of(x: SparseVector, window: Optional[int], m: int) -> int:
    top = x.support[-1] if x else 0
    w = max(top, m) if window is None else int(window)
    if top > w:
        raise ValueError(f"support reaches {top}, beyond the window {w}")
    if m > w:
        raise ValueError(f"order {m} exceeds the window size {w}")
    return w


def greedy_sets(
    x: SparseVector,
    m: int,
    window: Optional[int] = None,
    pad: str = "representative",
    cap: int = GREEDY_CAP,
) -> GreedySetFamily:
    """All greedy sets of order m, ties expanded.

    A is greedy when min over A of |x_i| >= max outside A of |x_i|. When
    m exceeds the support, the remaining slots are zero-coefficient window
    indices; ``pad="representative"`` keeps one such set (the residual is
    the same for all of them), ``pad="all"`` lists every choice.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    w = _window_of(x, window, m)
    if m == 0:
        return GreedySetFamily(0, math.inf, (frozenset(),), False)
    mods = sorted(((abs(v), i) for i, v in x.items()), key=lambda t: (-t[0], t[1]))
    if m <= len(mods):
        t = mods[m - 1][0]
        above = [i for a, i in mods if a > t]
        tie = [i for a, i in mods if a == t]
        r = m - len(above)
        if math.comb(len(tie), r) > cap:
            raise GreedyOverflowError(f"{math.comb(len(tie), r)} tied greedy sets exceed the cap {cap}")
        sets = tuple(frozenset(above).union(c) for c in itertools.combinations(tie, r))
        return GreedySetFamily(m, t, sets, False)
    supp = frozenset(x.support)
    zeros = [i for i in range(1, w + 1) if i not in supp]
    r = m - len(supp)
    if pad == "representative":
        return GreedySetFamily(m, 0.0, (supp.union(zeros[:r]),), True)
    if math.comb(len(zeros), r) > cap:
        raise GreedyOverflowError(f"{math.comb(len(zeros), r)} padded greedy sets exceed the cap {cap}")
    return GreedySetFamily(m, 0.0, tuple(supp.union(c) for c in itertools.combinations(zeros, r)), True)


def truncate(x: SparseVector, alpha: float) -> SparseVector:
    """Clamp coefficients of modulus above alpha to sgn(b) alpha."""
    if not alpha > 0:
        raise ValueError("truncation level must be positive")
    return SparseVector._trusted(
        x.support, tuple(math.copysign(alpha, v) if abs(v) > alpha else v for v in x.values)
    )


def greedy_error(x: SparseVector, spec: NormSpec, m: int, window: Optional[int] = None) -> Tuple[float, FrozenSet[int]]:
    """Largest ||x - P_G x|| over greedy sets G of order m, and a maximizing G."""
    fam = greedy_sets(x, m, window)
    best, arg = -1.0, frozenset()
    for G in fam.sets:
        v = norm(complement_project(x, G), spec)
        if v > best:
            best, arg = v, G
    return best, arg


@dataclass(frozen=True)
class ReferenceErrors:
    sigma_hat: float
    sigma_tilde: float
    sigma_check: float
    sigma_bar: float
    # prefix length attaining sigma_hat
    hat_k: int


def sigma_hat(x: SparseVector, spec: NormSpec, n: IndexSequence, m: int) -> Tuple[float, int]:
    best, arg = math.inf, 0
    for k in range(0, m + 1):
        v = norm(x - prefix_project(x, n, k), spec)
        if v < best:
            best, arg = v, k
    return best, arg


def sigma_tilde(x: SparseVector, spec: NormSpec, n: IndexSequence, m: int) -> float:
    # only A restricted to the support matters; n is infinite beyond it, so any
    # subset of size <= m of the support inside n extends to |A| = m
    on = [i for i in x.support if i in n]
    if count_subsets(len(on), m) > REFERENCE_GUARD:
        raise InfeasibleEnumeration("too many candidate sets for the restricted reference error")
    best = math.inf
    for r in range(0, min(m, len(on)) + 1):
        for A in itertools.combinations(on, r):
            best = min(best, norm(complement_project(x, A), spec))
    return best


def sigma_check(x: SparseVector, spec: NormSpec, n: IndexSequence, m: int) -> float:
    """Best error over consecutive blocks n_{k+1}, ..., n_{k+m}."""
    best = norm(x, spec)  # a block past the support
    if m == 0 or not x:
        return best
    top = x.support[-1]
    k = 0
    while n.has_element(k + 1) and n.element(k + 1) <= top:
        if not n.has_element(k + m):
            break
        block = frozenset(n.element(k + i) for i in range(1, m + 1))
        best = min(best, norm(complement_project(x, block), spec))
        k += 1
    return best


def sigma_bar(x: SparseVector, spec: NormSpec, n: IndexSequence, m: int) -> float:
    """Best error over consecutive n-blocks meeting the support in at most m points."""
    on = [i for i in x.support if i in n]
    best = norm(x, spec)
    for a in range(len(on)):
        for b in range(a + 1, min(len(on), a + m) + 1):
            best = min(best, norm(complement_project(x, on[a:b]), spec))
    return best


def reference_errors(x: SparseVector, spec: NormSpec, n: Optional[IndexSequence], m: int) -> ReferenceErrors:
    n = spec.n if n is None else n
    h, k = sigma_hat(x, spec, n, m)
    return ReferenceErrors(h, sigma_tilde(x, spec, n, m), sigma_check(x, spec, n, m), sigma_bar(x, spec, n, m), k)


@dataclass(frozen=True)
class ProfileRow:
    m: int
    gamma: float
    sigma_hat: float
    sigma_tilde: float
    sigma_check: float
    sigma_bar: float
    ratio: float


PROFILE_COLUMNS = ("m", "gamma", "sigma_hat", "sigma_tilde", "sigma_check", "sigma_bar", "ratio")


def error_ratio(gamma: float, sig: float, eta: float = 0.0) -> float:
    if sig > eta:
        return gamma / sig
    if gamma > eta:
        return math.inf
    return math.nan


def tga_error_profile(
    x: SparseVector,
    spec: NormSpec,
    n: Optional[IndexSequence],
    m_max: int,
    window: Optional[int] = None,
    eta: float = 1e-6,
) -> List[ProfileRow]:
    n = spec.n if n is None else n
    w = _window_of(x, window, m_max)
    rows = []
    for m in range(0, m_max + 1):
        g, _ = greedy_error(x, spec, m, w)
        ref = reference_errors(x, spec, n, m)
        rows.append(ProfileRow(m, g, ref.sigma_hat, ref.sigma_tilde, ref.sigma_check, ref.sigma_bar,
                               error_ratio(g, ref.sigma_hat, eta)))
    return rows


def fmt(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    out = f"{v:.12g}"
    if not any(c in out for c in ".en"):
        out += ".0"
    return out


def profile_csv(rows: Sequence[ProfileRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_COLUMNS)
    for r in rows:
        w.writerow([r.m] + [fmt(getattr(r, c)) for c in PROFILE_COLUMNS[1:]])
    return buf.getvalue()
