"""Brute-force oracles for the fast evaluators.

Each oracle enumerates the finite objects directly (sets, injections into
weight positions, candidate greedy sets) without the sorting arguments the
evaluators rely on. Only meant for small supports.
"""

from __future__ import annotations

import itertools
import math
import random
from functools import lru_cache
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np

from .core import IndexSequence, SparseVector
from .greedy import greedy_sets
from .norms import NormSpec, norm, weight_values

ORACLE_SEED = 0x5EED
MAX_SUPPORT = 6


@lru_cache(maxsize=None)
def _injections(size: int, slots: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(slots), size)), dtype=np.intp).reshape(-1, size)


def brute_rearrangement(mods: Sequence[float], weights: str) -> float:
    """max over injections pi of sum w_pi(i) a_i, with one spare weight slot."""
    s = len(mods)
    if s == 0:
        return 0.0
    w = np.array(weight_values(weights, s + 1))
    inj = _injections(s, s + 1)
    return float((w[inj] @ np.asarray(mods, dtype=float)).max())


def brute_family(items: Sequence[Tuple[int, float]], admissible: Callable[[Tuple[int, ...]], bool],
                 weights: str) -> float:
    """max over admissible subsets F of the keys and injections into weight positions."""
    best = 0.0
    for r in range(1, len(items) + 1):
        for F in itertools.combinations(items, r):
            if admissible(tuple(k for k, _ in F)):
                best = max(best, brute_rearrangement([a for _, a in F], weights))
    return best


def _phi(K: IndexSequence, v: int) -> int:
    return max(1, sum(1 for k in K.elements_upto(v) if k < v))


def _sqrt_min_ok(F) -> bool:
    return math.sqrt(min(F)) >= len(F)


def oracle_partitioned(x: SparseVector, spec: NormSpec) -> float:
    combiner = spec.params.get("combiner", "sum")
    vals = []
    for block in spec.params["blocks"]:
        sel = block["select"]
        how, _, names = sel.partition(":")
        seqs = [spec.seq(s) for s in names.split(",")] if names else []
        if how == "all":
            ent = list(x.items())
        elif how == "in":
            ent = [(j, v) for j, v in x.items() if any(j in s for s in seqs)]
        else:
            ent = [(j, v) for j, v in x.items() if all(j not in s for s in seqs)]
        mods = [abs(v) for _, v in ent]
        mode = block["mode"]
        if mode == "lp":
            p = float(block.get("p", 1))
            vals.append(sum(a ** p for a in mods) ** (1 / p))
        elif mode == "linf":
            vals.append(max(mods, default=0.0))
        elif mode == "rearrangement":
            vals.append(brute_rearrangement(mods, block["weights"]))
        elif mode == "family":
            seq = seqs[0]
            items = [(seq.index_of(j), abs(v)) for j, v in ent]
            vals.append(brute_family(items, _sqrt_min_ok, block["weights"]))
    return sum(vals) if combiner == "sum" else max(vals, default=0.0)


def oracle_family_weight(x: SparseVector, spec: NormSpec) -> float:
    p, n = spec.params, spec.n
    if p["predicate"] == "sqrt_min":
        ok = _sqrt_min_ok
    else:
        K = spec.seq("K")
        ok = lambda F: math.sqrt(_phi(K, min(F))) >= len(F)
    items, off = [], []
    for j, v in x.items():
        if p["domain"] == "all":
            items.append((j, abs(v)))
        elif j in n:
            items.append((n.index_of(j) if p["domain"] == "n_positions" else j, abs(v)))
        else:
            off.append(abs(v))
    fam = brute_family(items, ok, p["weights"])
    if p.get("tail", "l1_off_n") == "l2":
        return fam + math.sqrt(sum(v * v for v in x.values))
    return fam + sum(off)


def oracle_lambda(x: SparseVector, spec: NormSpec) -> float:
    # F over subsets of the support plus a padding index outside n'
    sub = spec.seq("n_prime")
    mods = dict(x.abs().items())
    pad = next(j for j in itertools.count(1) if j not in sub and j not in mods)
    keys = list(mods) + [pad]
    best = 0.0
    for r in range(1, len(keys) + 1):
        for F in itertools.combinations(keys, r):
            w = "inv_sqrt" if all(j in sub for j in F) else "inv"
            best = max(best, brute_rearrangement([mods.get(j, 0.0) for j in F], w))
    return best


ORACLES = {
    "partitioned_rearrangement": oracle_partitioned,
    "family_weight": oracle_family_weight,
    "lambda_weight": oracle_lambda,
}


def oracle_norm(x: SparseVector, spec: NormSpec) -> float:
    return ORACLES[spec.family](x, spec)


def has_suprema(spec: NormSpec) -> bool:
    """Norms whose evaluator reduces a rearrangement or family supremum."""
    if spec.family in ("family_weight", "lambda_weight"):
        return True
    if spec.family == "partitioned_rearrangement":
        return any(b["mode"] in ("rearrangement", "family") for b in spec.params["blocks"])
    return False


def oracle_library(count: int = 500, window: int = 14, max_support: int = MAX_SUPPORT,
                   seed: int = ORACLE_SEED) -> List[SparseVector]:
    """Deterministic vectors with |supp| <= max_support, including tied moduli."""
    rng = random.Random(seed)
    levels = (0.25, 0.5, 1.0)
    out = []
    for i in range(count):
        size = 1 + i % max_support
        S = rng.sample(range(1, window + 1), size)
        if i % 3 == 0:
            vals = [rng.choice(levels) * rng.choice((1, -1)) for _ in S]
        else:
            vals = [round(rng.uniform(-2, 2), 6) or 1.0 for _ in S]
        out.append(SparseVector(zip(S, vals)))
    return out


def compare_norm(spec: NormSpec, vectors: Iterable[SparseVector], tol: float = 1e-12):
    """First (x, fast, oracle) disagreement beyond tol, or None."""
    for x in vectors:
        a, b = norm(x, spec), oracle_norm(x, spec)
        if abs(a - b) > tol * max(1.0, abs(b)):
            return x, a, b
    return None


def brute_greedy_sets(x: SparseVector, m: int, window: int) -> set:
    mods = {i: abs(x[i]) for i in range(1, window + 1)}
    out = set()
    for A in itertools.combinations(range(1, window + 1), m):
        inside = min((mods[i] for i in A), default=math.inf)
        outside = max((mods[i] for i in mods if i not in A), default=0.0)
        if inside >= outside:
            out.add(frozenset(A))
    return out


def compare_greedy(vectors: Iterable[SparseVector], window: int = 14, m_max: int = 4):
    for x in vectors:
        for m in range(0, m_max + 1):
            fast = set(greedy_sets(x, m, window, pad="all", cap=10**6).sets)
            slow = brute_greedy_sets(x, m, window)
            if fast != slow:
                return x, m, fast, slow
    return None
