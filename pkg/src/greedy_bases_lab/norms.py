"""Norm catalog and exact evaluators.

Every evaluator returns a NormValue: the norm plus a witness recording
which arrangement attains it (block values, chosen family set, pairing).
Suprema over bijections are computed by pairing sorted moduli with sorted
weights; suprema over admissible families by scanning candidate minima.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .core import IndexSequence, SparseVector, indicator

FAMILIES = (
    "partitioned_rearrangement",
    "family_weight",
    "summing",
    "split_l1_sup",
    "gap_order",
    "gap_pk",
    "lambda_weight",
)


class NormConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Flags:
    one_unconditional: bool = False
    one_pslc_expected: bool = False
    normalized: bool = True
    # norm depends only on coefficient moduli
    sign_invariant: bool = False


@dataclass
class NormSpec:
    id: str
    family: str
    sequences: Dict[str, IndexSequence]
    params: dict
    flags: Flags = field(default_factory=Flags)
    description: str = ""
    doc: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> IndexSequence:
        return self.sequences["n"]

    def seq(self, name: str) -> IndexSequence:
        try:
            return self.sequences[name]
        except KeyError:
            raise NormConfigError(f"norm {self.id!r} has no sequence named {name!r}") from None

    def with_n(self, n: IndexSequence) -> "NormSpec":
        doc = json.loads(json.dumps(self.doc))
        doc["sequences"]["n"] = n.to_json()
        return build_norm(doc)

    def __call__(self, x: SparseVector) -> float:
        return evaluate(x, self).value


@dataclass(frozen=True)
class NormValue:
    value: float
    witness: dict


# ---------------------------------------------------------------------------
# weights and pairing


def weight_values(name: str, count: int) -> List[float]:
    if name == "inv_sqrt":
        return [1.0 / math.sqrt(i) for i in range(1, count + 1)]
    if name == "inv":
        return [1.0 / i for i in range(1, count + 1)]
    if name == "ones":
        return [1.0] * count
    raise NormConfigError(f"unknown weight sequence {name!r}")


def pair_sorted(moduli: Sequence[float], weights: Sequence[float]) -> Tuple[float, List[int]]:
    """Supremum of sum w_pi(i) a_i over bijections onto the first len(moduli) weights.

    With nonincreasing weights, the optimum pairs the largest modulus with
    the largest weight. Returns the sum and the order of the moduli used.
    """
    order = sorted(range(len(moduli)), key=lambda i: -moduli[i])
    total = math.fsum(w * moduli[i] for w, i in zip(weights, order))
    return total, order


def _lp(values: Sequence[float], p: float) -> float:
    if not values:
        return 0.0
    if p == 1:
        return math.fsum(values)
    if p == 2:
        return math.sqrt(math.fsum(v * v for v in values))
    if math.isinf(p):
        return max(values)
    return math.fsum(v**p for v in values) ** (1.0 / p)


def family_sup(
    items: Sequence[Tuple[int, float]],
    cap: Callable[[int], int],
    weights: str,
) -> Tuple[float, Tuple[int, ...]]:
    """Supremum over admissible finite sets F of the weighted rearranged sum.

    ``items`` are (key, modulus) pairs; F is admissible when |F| <= cap(min key
    of F) and ``cap`` is nondecreasing. For a candidate minimum v the best F
    takes the cap(v) largest moduli among keys >= v, and restricting v to
    keys present in ``items`` loses nothing. Returns the value and the keys
    of an optimal F.
    """
    if not items:
        return 0.0, ()
    ordered = sorted(items, key=lambda t: -t[0])
    eligible: List[Tuple[float, int]] = []  # (-modulus, key), sorted
    best = 0.0
    best_keys: Tuple[int, ...] = ()
    for key, mod in ordered:
        bisect.insort(eligible, (-mod, key))
        c = min(cap(key), len(eligible))
        if c <= 0:
            continue
        top = eligible[:c]
        w = weight_values(weights, c)
        val = math.fsum(wi * -t[0] for wi, t in zip(w, top))
        if val > best:
            best = val
            best_keys = tuple(sorted(t[1] for t in top))
    return best, best_keys


# ---------------------------------------------------------------------------
# selectors for partitioned norms


def _selector(spec: NormSpec, text: str) -> Callable[[int], bool]:
    if text == "all":
        return lambda j: True
    how, _, names = text.partition(":")
    seqs = [spec.seq(s) for s in names.split(",")]
    if how == "in":
        return lambda j: any(j in s for s in seqs)
    if how == "not_in":
        return lambda j: not any(j in s for s in seqs)
    raise NormConfigError(f"bad block selector {text!r}")


def _block_value(spec: NormSpec, block: dict, entries: List[Tuple[int, float]]):
    mode = block["mode"]
    mods = [abs(v) for _, v in entries]
    if mode == "lp":
        return _lp(mods, float(block.get("p", 1))), {}
    if mode == "linf":
        return max(mods, default=0.0), {}
    if mode == "rearrangement":
        total, order = pair_sorted(mods, weight_values(block["weights"], len(mods)))
        return total, {"pairing": [entries[i][0] for i in order]}
    if mode == "family":
        seq = spec.seq(block["select"].partition(":")[2])
        items = [(seq.index_of(j), abs(v)) for j, v in entries]
        val, keys = family_sup(items, _cap_sqrt_min, block["weights"])
        return val, {"family": [seq.element(k) for k in keys]}
    raise NormConfigError(f"unknown block mode {mode!r}")


def _cap_sqrt_min(v: int) -> int:
    return math.isqrt(v)


def eval_partitioned_rearrangement_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    blocks = spec.params["blocks"]
    combiner = spec.params.get("combiner", "sum")
    sels = [_selector(spec, b["select"]) for b in blocks]
    parts: List[List[Tuple[int, float]]] = [[] for _ in blocks]
    for j, v in x.items():
        hit = [bi for bi, sel in enumerate(sels) if sel(j)]
        if not hit:
            raise NormConfigError(f"index {j} is not covered by any block of {spec.id!r}")
        if combiner == "sum" and len(hit) > 1:
            raise NormConfigError(f"index {j} lies in several blocks of {spec.id!r}")
        for bi in hit:
            parts[bi].append((j, v))
    vals, wits = [], []
    for block, entries in zip(blocks, parts):
        val, wit = _block_value(spec, block, entries)
        vals.append(val)
        wits.append(wit)
    total = math.fsum(vals) if combiner == "sum" else max(vals, default=0.0)
    return NormValue(total, {"blocks": vals, "detail": wits})


def _phi_cap(K: IndexSequence) -> Callable[[int], int]:
    # phi(v) = 1 up to k_1, then j on (k_j, k_{j+1}]
    return lambda v: math.isqrt(max(1, K.count_upto(v - 1)))


def eval_family_weight_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    p = spec.params
    n = spec.n
    domain = p["domain"]
    if p["predicate"] == "sqrt_min":
        cap = _cap_sqrt_min
    elif p["predicate"] == "sqrt_phi":
        cap = _phi_cap(spec.seq("K"))
    else:
        raise NormConfigError(f"unknown admissibility predicate {p['predicate']!r}")
    items, off = [], []
    for j, v in x.items():
        if domain == "all":
            items.append((j, abs(v)))
        elif j in n:
            items.append((n.index_of(j) if domain == "n_positions" else j, abs(v)))
        else:
            off.append(abs(v))
    fam, keys = family_sup(items, cap, p["weights"])
    if domain == "n_positions":
        keys = tuple(n.element(k) for k in keys)
    tail = p.get("tail", "l1_off_n")
    if tail == "l1_off_n":
        tval = math.fsum(off)
    elif tail == "l2":
        tval = math.sqrt(math.fsum(v * v for v in x.values))
    else:
        raise NormConfigError(f"unknown tail {tail!r}")
    return NormValue(fam + tval, {"family": list(keys), "family_value": fam, "tail": tval})


def eval_summing_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    seq = spec.seq(spec.params.get("sum_seq", "n"))
    partial = 0.0
    best = 0.0
    best_at = None
    off = 0.0
    for j, v in x.items():
        if j in seq:
            partial += v
            if abs(partial) > best:
                best, best_at = abs(partial), j
        else:
            off = max(off, abs(v))
    return NormValue(best + off, {"partial_sum_max": best, "at": best_at, "off_max": off})


def eval_split_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    n = spec.n
    odd, even, off = 0.0, 0.0, 0.0
    for j, v in x.items():
        if j in n:
            if n.index_of(j) % 2:
                odd += abs(v)
            else:
                even = max(even, abs(v))
        else:
            off = max(off, abs(v))
    terms = {"odd_l1": odd, "off_max": off, "even_max": even}
    return NormValue(max(terms.values()), terms)


def _check_window(x: SparseVector, spec: NormSpec) -> None:
    w = spec.params.get("window")
    if w is not None and x and x.support[-1] > w:
        raise NormConfigError(f"support exceeds the evaluation window {w} of {spec.id!r}")


def eval_gap_order_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    _check_window(x, spec)
    n, s = spec.n, spec.seq("s")
    mods = x.abs()
    sup = mods.sup_norm()
    # sets S with |S| in s and n_{|S|} < S restricted to n; zero-padding is free
    best_S, best_size = 0.0, None
    k = 1
    while s.has_element(k):
        size = s.element(k)
        ns = n.element(size)
        elig = sorted((v for j, v in mods.items() if j not in n or j > ns), reverse=True)
        val = math.fsum(elig[:size])
        if val > best_S:
            best_S, best_size = val, size
        if size >= len(x):
            break
        k += 1
    else:
        if x:
            raise NormConfigError("gap sequence too short for this support")
    # partial sums over the blocks following s_{k_j}
    best_B, best_j = 0.0, None
    for j, kj in enumerate(spec.params["gap_indices"], start=1):
        base = s.element(kj)
        partial = 0.0
        for i in range(1, j * base + 1):
            idx = n.element(base + i)
            if x and idx > x.support[-1]:
                break
            partial += x[idx]
            if abs(partial) > best_B:
                best_B, best_j = abs(partial), j
    terms = {"sup": sup, "sets": best_S, "blocks": best_B}
    return NormValue(max(terms.values()), dict(terms, set_size=best_size, block_j=best_j))


def gap_pk_exponent(spec: NormSpec, k: int) -> float:
    rule = spec.params.get("p_rule", "log2")
    if rule == "log2":
        return 2.0 if k <= 1 else 1.0 + 1.0 / math.ceil(math.log2(k))
    return float(rule[k - 1])


def eval_gap_pk_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    _check_window(x, spec)
    n, s = spec.n, spec.seq("s")
    window = spec.params["window"]
    mods = x.abs()
    sup = mods.sup_norm()
    on = [(j, v) for j, v in mods.items() if j in n]
    off = [v for j, v in mods.items() if j not in n]
    top = x.support[-1] if x else 0
    # l1-type part: supremum over k of block l^{p_k} sums; beyond the support
    # only the off-n term survives and it increases to its l1 value as p_k -> 1
    best_1, best_k = math.fsum(off), "limit"
    k = 1
    while True:
        if not s.has_element(k):
            raise NormConfigError("gap sequence too short for this support")
        nsk = n.element(s.element(k))
        if nsk >= top:
            break
        pk = gap_pk_exponent(spec, k)
        elig = sorted((v for j, v in on if j > nsk), reverse=True)[: 10**k]
        val = _lp(elig, pk) + _lp(off, pk)
        if val > best_1:
            best_1, best_k = val, k
        k += 1
    best_T, best_j = 0.0, None
    for j, kj in enumerate(spec.params["gap_indices"], start=1):
        if 10**j > window:
            break
        base = s.element(kj)
        p = gap_pk_exponent(spec, kj + 1)
        lo, hi = n.element(base + 1), n.element(base + 10**j)
        vals = [v for i, v in on if lo <= i <= hi]
        val = _lp(vals, p)
        if val > best_T:
            best_T, best_j = val, j
    terms = {"sup": sup, "l1_part": best_1, "blocks": best_T}
    return NormValue(max(terms.values()), dict(terms, k=best_k, block_j=best_j))


def eval_lambda_norm(x: SparseVector, spec: NormSpec) -> NormValue:
    sub = spec.seq("n_prime")
    mods = x.abs()
    inside = [v for j, v in mods.items() if j in sub]
    # F inside the subsequence: weights 1/sqrt(r)
    a, _ = pair_sorted(inside, weight_values("inv_sqrt", len(inside)))
    # any other F (pad with a zero index outside the subsequence if needed): weights 1/r
    allv = list(mods.values)
    b, _ = pair_sorted(allv, weight_values("inv", len(allv)))
    return NormValue(max(a, b), {"inside": a, "general": b})


_EVALUATORS = {
    "partitioned_rearrangement": eval_partitioned_rearrangement_norm,
    "family_weight": eval_family_weight_norm,
    "summing": eval_summing_norm,
    "split_l1_sup": eval_split_norm,
    "gap_order": eval_gap_order_norm,
    "gap_pk": eval_gap_pk_norm,
    "lambda_weight": eval_lambda_norm,
}


def evaluate(x: SparseVector, spec: NormSpec) -> NormValue:
    try:
        fn = _EVALUATORS[spec.family]
    except KeyError:
        raise NormConfigError(f"unknown norm family {spec.family!r}") from None
    return fn(x, spec)


def norm(x: SparseVector, spec: NormSpec) -> float:
    return _EVALUATORS[spec.family](x, spec).value


def indicator_norm(spec: NormSpec, A, eps: Optional[Mapping[int, int]] = None) -> float:
    return norm(indicator(A, eps), spec)


# ---------------------------------------------------------------------------
# catalog


def lambda_positions(lam: float, count: int) -> List[int]:
    """Smallest increasing k_j with log(ceil((lam - 1) k_j)) >= 2 sqrt(j)."""
    if lam <= 1:
        raise NormConfigError("lambda must exceed 1")
    out: List[int] = []
    k = 0
    for j in range(1, count + 1):
        target = math.exp(2 * math.sqrt(j))
        k = max(k + 1, math.floor(target / (lam - 1)) - 2)
        while math.log(math.ceil((lam - 1) * k)) < 2 * math.sqrt(j):
            k += 1
        out.append(k)
    return out


def _build_sequences(doc: dict) -> Dict[str, IndexSequence]:
    seqs: Dict[str, IndexSequence] = {}
    for name, sdoc in doc["sequences"].items():
        if isinstance(sdoc, dict) and sdoc.get("kind") == "lambda_positions":
            seqs[name] = IndexSequence.from_json(
                {"kind": "list", "elements": lambda_positions(sdoc["lam"], sdoc["count"])}
            )
        else:
            seqs[name] = IndexSequence.from_json(sdoc, seqs)
    if "n" not in seqs:
        raise NormConfigError(f"norm {doc.get('id')!r} needs a sequence named 'n'")
    return seqs


def _validate(spec: NormSpec) -> None:
    fam = spec.family
    if fam not in FAMILIES:
        raise NormConfigError(f"unknown norm family {fam!r}")
    if fam == "gap_order":
        s = spec.seq("s")
        for j, kj in enumerate(spec.params["gap_indices"], start=1):
            if not s.element(kj + 1) > 3 * (j + 1) * s.element(kj):
                raise NormConfigError(f"quotient gap condition fails at j={j}")
    if fam == "gap_pk":
        s = spec.seq("s")
        for j, kj in enumerate(spec.params["gap_indices"], start=1):
            if not s.element(kj + 1) - s.element(kj) > 3 * 10**j:
                raise NormConfigError(f"additive gap condition fails at j={j}")
        prev = math.inf
        for k in range(1, len(spec.params["gap_indices"]) + 3):
            pk = gap_pk_exponent(spec, k)
            if not (1 < pk <= prev):
                raise NormConfigError("exponents must decrease and stay above 1")
            prev = pk
    if fam == "lambda_weight":
        lam = spec.params["lam"]
        pos = spec.seq("n_prime_positions")
        for j, kj in enumerate(pos.elements_upto(pos.sup_bound() or 0), start=1):
            if math.log(math.ceil((lam - 1) * kj)) < 2 * math.sqrt(j):
                raise NormConfigError(f"subsequence growth condition fails at j={j}")
    if fam == "summing" and "sum_seq" in spec.params and "n_prime" in spec.sequences:
        sub = spec.seq("n_prime")
        for v in sub.elements_upto(200):
            if v - 1 in spec.n:
                raise NormConfigError(f"{v - 1} must lie outside n")


def build_norm(doc: dict, n: Optional[IndexSequence] = None) -> NormSpec:
    doc = json.loads(json.dumps(doc))
    if n is not None:
        doc["sequences"]["n"] = n.to_json()
    seqs = _build_sequences(doc)
    flags = Flags(**doc.get("flags", {}))
    spec = NormSpec(
        id=doc["id"],
        family=doc["family"],
        sequences=seqs,
        params=doc.get("params", {}),
        flags=flags,
        description=doc.get("description", ""),
        doc=doc,
    )
    _validate(spec)
    return spec


def catalog_docs() -> Dict[str, dict]:
    docs = {}
    root = resources.files(__package__) / "catalog"
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            d = json.loads(entry.read_text())
            docs[d["id"]] = d
    return docs


_SPEC_CACHE: Dict[Tuple[str, Optional[str]], NormSpec] = {}


def get_norm(name: str, n: Optional[IndexSequence] = None) -> NormSpec:
    """Catalog norm by id, a path to a JSON document, or inline JSON."""
    key = (name, None if n is None else n.ident)
    if key in _SPEC_CACHE:
        return _SPEC_CACHE[key]
    docs = catalog_docs()
    if name in docs:
        doc = docs[name]
    elif name.strip().startswith("{"):
        doc = json.loads(name)
    else:
        with open(name) as fh:
            doc = json.load(fh)
    spec = build_norm(doc, n)
    _SPEC_CACHE[key] = spec
    return spec


def catalog_ids() -> List[str]:
    return list(catalog_docs())
