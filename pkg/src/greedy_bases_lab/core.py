"""Sparse vectors, index sequences and admissible set pairs.

Indices are positive integers (1-based). Scalars are real; signs are +1/-1.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

PAIR_GUARD = 10**8

CLASS_NAMES = ("T_n", "S_n", "T_n_s", "T_omega_n", "Lambda")


class InfeasibleEnumeration(ValueError):
    """Raised when an enumeration would exceed its feasibility guard."""


class SparseVector:
    """Finitely supported real vector with no stored zeros.

    Entries are kept sorted by index. Instances are immutable and hashable.
    """

    __slots__ = ("_idx", "_val", "_hash")

    def __init__(self, entries: Mapping[int, float] | Iterable[Tuple[int, float]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: Dict[int, float] = {}
        for i, v in entries:
            i = int(i)
            if i < 1:
                raise ValueError(f"indices are 1-based, got {i}")
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"non-finite coefficient at {i}")
            acc[i] = acc.get(i, 0.0) + v
        idx = sorted(k for k, v in acc.items() if v != 0.0)
        self._idx = tuple(idx)
        self._val = tuple(acc[k] for k in idx)
        self._hash = None

    @classmethod
    def _trusted(cls, idx: Tuple[int, ...], val: Tuple[float, ...]) -> "SparseVector":
        # caller guarantees sorted distinct indices and nonzero values
        obj = cls.__new__(cls)
        obj._idx = idx
        obj._val = val
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "SparseVector":
        return cls._trusted((), ())

    @classmethod
    def unit(cls, k: int, coef: float = 1.0) -> "SparseVector":
        return cls({k: coef})

    @property
    def support(self) -> Tuple[int, ...]:
        return self._idx

    @property
    def values(self) -> Tuple[float, ...]:
        return self._val

    def items(self) -> Iterator[Tuple[int, float]]:
        return zip(self._idx, self._val)

    def __getitem__(self, k: int) -> float:
        pos = bisect.bisect_left(self._idx, k)
        if pos < len(self._idx) and self._idx[pos] == k:
            return self._val[pos]
        return 0.0

    def __len__(self) -> int:
        return len(self._idx)

    def __bool__(self) -> bool:
        return bool(self._idx)

    def __iter__(self):
        return iter(self._idx)

    def _combine(self, other: "SparseVector", sign: float) -> "SparseVector":
        acc = dict(self.items())
        for i, v in other.items():
            acc[i] = acc.get(i, 0.0) + sign * v
        return SparseVector(acc)

    def __add__(self, other: "SparseVector") -> "SparseVector":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self._combine(other, -1.0)

    def __neg__(self) -> "SparseVector":
        return SparseVector._trusted(self._idx, tuple(-v for v in self._val))

    def __mul__(self, c: float) -> "SparseVector":
        c = float(c)
        if c == 0.0:
            return SparseVector.zero()
        return SparseVector._trusted(self._idx, tuple(c * v for v in self._val))

    __rmul__ = __mul__

    def abs(self) -> "SparseVector":
        return SparseVector._trusted(self._idx, tuple(abs(v) for v in self._val))

    def sup_norm(self) -> float:
        return max((abs(v) for v in self._val), default=0.0)

    def restrict(self, keep: Callable[[int], bool]) -> "SparseVector":
        pairs = [(i, v) for i, v in self.items() if keep(i)]
        return SparseVector._trusted(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._idx == other._idx and self._val == other._val

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._idx, self._val))
        return self._hash

    def to_literal(self) -> str:
        """Render as ``idx:coef`` pairs, e.g. ``1:1,4:-0.5``."""
        return ",".join(f"{i}:{v!r}" for i, v in self.items())

    def __repr__(self) -> str:
        return f"SparseVector({{{', '.join(f'{i}: {v!r}' for i, v in self.items())}}})"


# ---------------------------------------------------------------------------
# index sequences


_PREDICATES: Dict[str, Callable[..., bool]] = {
    "naturals": lambda j: True,
    "evens": lambda j: j % 2 == 0,
    "odds": lambda j: j % 2 == 1,
    "squares": lambda j: math.isqrt(j) ** 2 == j,
    "powers_of_2": lambda j: j & (j - 1) == 0,
    "primes": lambda j: j > 1 and all(j % p for p in range(2, math.isqrt(j) + 1)),
    "residues": lambda j, modulus, residues: j % modulus in residues,
}

_NAMED = {
    "naturals": {"kind": "arithmetic", "first": 1, "step": 1},
    "N": {"kind": "arithmetic", "first": 1, "step": 1},
    "evens": {"kind": "arithmetic", "first": 2, "step": 2},
    "odds": {"kind": "arithmetic", "first": 1, "step": 2},
    "mult4": {"kind": "arithmetic", "first": 4, "step": 4},
    "squares": {"kind": "predicate", "name": "squares", "window": 10**6},
    "powers_of_2": {"kind": "predicate", "name": "powers_of_2", "window": 2**40},
}


class IndexSequence:
    """Strictly increasing sequence of positive integers.

    Subclasses implement ``_compute_upto``; the base class caches a
    materialized prefix and answers membership, positions and elements
    from it. Arithmetic sequences override with closed forms.
    """

    kind = "abstract"

    def __init__(self):
        self._cache: list = []
        self._cache_upto = 0

    # bound on the largest element, None when unbounded
    def sup_bound(self) -> Optional[int]:
        return None

    def _compute_upto(self, N: int) -> list:
        raise NotImplementedError

    def _materialize(self, N: int) -> None:
        if N <= self._cache_upto:
            return
        target = max(N, 2 * self._cache_upto, 64)
        self._cache = list(self._compute_upto(target))
        self._cache_upto = target

    def elements_upto(self, N: int) -> Tuple[int, ...]:
        if N < 1:
            return ()
        self._materialize(N)
        return tuple(self._cache[: bisect.bisect_right(self._cache, N)])

    def count_upto(self, N: int) -> int:
        if N < 1:
            return 0
        self._materialize(N)
        return bisect.bisect_right(self._cache, N)

    def __contains__(self, j: int) -> bool:
        if j < 1:
            return False
        self._materialize(j)
        pos = bisect.bisect_left(self._cache, j)
        return pos < len(self._cache) and self._cache[pos] == j

    def index_of(self, j: int) -> int:
        """Position of ``j`` in the sequence (1-based)."""
        if j not in self:
            raise KeyError(f"{j} is not an element of the sequence")
        return self.count_upto(j)

    def element(self, k: int) -> int:
        """The k-th element (1-based)."""
        if k < 1:
            raise IndexError("positions are 1-based")
        N = max(64, self._cache_upto)
        bound = self.sup_bound()
        while True:
            self._materialize(N)
            if len(self._cache) >= k:
                return self._cache[k - 1]
            if bound is not None and N >= bound:
                raise IndexError(f"sequence has fewer than {k} elements within its window")
            N *= 2
            if bound is not None:
                N = min(N, bound)

    def prefix(self, m: int) -> Tuple[int, ...]:
        return tuple(self.element(k) for k in range(1, m + 1))

    def has_element(self, k: int) -> bool:
        try:
            self.element(k)
        except IndexError:
            return False
        return True

    def first_after(self, j: int) -> Optional[int]:
        k = self.count_upto(j) + 1
        return self.element(k) if self.has_element(k) else None

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def ident(self) -> str:
        for name, doc in _NAMED.items():
            if doc == self.to_json():
                return name
        return _compact_json(self.to_json())

    def __eq__(self, other) -> bool:
        return isinstance(other, IndexSequence) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(_compact_json(self.to_json()))

    def __repr__(self) -> str:
        return f"IndexSequence({self.ident})"

    @staticmethod
    def from_json(doc, refs: Optional[Mapping[str, "IndexSequence"]] = None) -> "IndexSequence":
        refs = refs or {}
        if isinstance(doc, IndexSequence):
            return doc
        if isinstance(doc, str):
            if doc in refs:
                return refs[doc]
            if doc in _NAMED:
                return IndexSequence.from_json(_NAMED[doc])
            raise ValueError(f"unknown sequence name {doc!r}")
        if "ref" in doc:
            return refs[doc["ref"]]
        kind = doc.get("kind")
        sub = lambda d: IndexSequence.from_json(d, refs)  # noqa: E731
        if kind == "list":
            return ListSequence(doc["elements"])
        if kind == "arithmetic":
            return ArithmeticSequence(doc["first"], doc.get("step", 1))
        if kind == "predicate":
            extra = {k: v for k, v in doc.items() if k not in ("kind", "name", "window")}
            return PredicateSequence(doc["name"], doc["window"], **extra)
        if kind == "subsequence":
            return Subsequence(sub(doc["of"]), sub(doc["positions"]))
        if kind == "union":
            return UnionSequence([sub(p) for p in doc["parts"]])
        if kind == "difference":
            return DifferenceSequence(sub(doc["of"]), sub(doc["minus"]))
        if kind == "complement":
            return DifferenceSequence(ArithmeticSequence(1, 1), sub(doc["of"]))
        if kind == "shifted":
            return ShiftedSequence(sub(doc["of"]), doc["offset"])
        raise ValueError(f"unknown sequence kind {kind!r}")

    @staticmethod
    def named(name: str) -> "IndexSequence":
        return IndexSequence.from_json(name)


def _compact_json(doc) -> str:
    import json

    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class ListSequence(IndexSequence):
    kind = "list"

    def __init__(self, elements: Sequence[int]):
        super().__init__()
        els = [int(e) for e in elements]
        if any(e < 1 for e in els) or any(b <= a for a, b in zip(els, els[1:])):
            raise ValueError("list sequences must be strictly increasing positive integers")
        self._elements = tuple(els)

    def sup_bound(self):
        return self._elements[-1] if self._elements else 0

    def _compute_upto(self, N):
        return [e for e in self._elements if e <= N]

    def to_json(self):
        return {"kind": "list", "elements": list(self._elements)}


class ArithmeticSequence(IndexSequence):
    kind = "arithmetic"

    def __init__(self, first: int, step: int = 1):
        super().__init__()
        if first < 1 or step < 1:
            raise ValueError("arithmetic sequences need first >= 1 and step >= 1")
        self.first = int(first)
        self.step = int(step)

    def _compute_upto(self, N):
        return list(range(self.first, N + 1, self.step))

    def __contains__(self, j):
        return j >= self.first and (j - self.first) % self.step == 0

    def index_of(self, j):
        if j not in self:
            raise KeyError(f"{j} is not an element of the sequence")
        return (j - self.first) // self.step + 1

    def count_upto(self, N):
        return 0 if N < self.first else (N - self.first) // self.step + 1

    def elements_upto(self, N):
        return tuple(range(self.first, N + 1, self.step))

    def element(self, k):
        if k < 1:
            raise IndexError("positions are 1-based")
        return self.first + (k - 1) * self.step

    def to_json(self):
        return {"kind": "arithmetic", "first": self.first, "step": self.step}


class PredicateSequence(IndexSequence):
    """Integers in ``[1, window]`` satisfying a registered predicate."""

    kind = "predicate"

    def __init__(self, name: str, window: int, **args):
        super().__init__()
        if name not in _PREDICATES:
            raise ValueError(f"unknown predicate {name!r}")
        self.name = name
        self.window = int(window)
        self.args = args
        fn = _PREDICATES[name]
        if name == "residues":
            mod, res = int(args["modulus"]), frozenset(args["residues"])
            self._pred = lambda j: fn(j, mod, res)
        else:
            self._pred = fn

    def sup_bound(self):
        return self.window

    def __contains__(self, j):
        return 1 <= j <= self.window and bool(self._pred(j))

    def _compute_upto(self, N):
        return [j for j in range(1, min(N, self.window) + 1) if self._pred(j)]

    def to_json(self):
        doc = {"kind": "predicate", "name": self.name, "window": self.window}
        doc.update(self.args)
        return doc


class Subsequence(IndexSequence):
    """Elements of ``base`` at the positions listed by ``positions``."""

    kind = "subsequence"

    def __init__(self, base: IndexSequence, positions: IndexSequence):
        super().__init__()
        self.base = base
        self.positions = positions

    def sup_bound(self):
        pb = self.positions.sup_bound()
        if pb is None:
            return self.base.sup_bound()
        if pb == 0:
            return 0
        last = self.positions.elements_upto(pb)
        if not last:
            return 0
        return self.base.element(last[-1]) if self.base.has_element(last[-1]) else self.base.sup_bound()

    def __contains__(self, j):
        return j in self.base and self.base.index_of(j) in self.positions

    def _compute_upto(self, N):
        return [self.base.element(p) for p in self.positions.elements_upto(self.base.count_upto(N))]

    def to_json(self):
        return {"kind": "subsequence", "of": self.base.to_json(), "positions": self.positions.to_json()}


class UnionSequence(IndexSequence):
    kind = "union"

    def __init__(self, parts: Sequence[IndexSequence]):
        super().__init__()
        self.parts = tuple(parts)

    def sup_bound(self):
        bounds = [p.sup_bound() for p in self.parts]
        return None if any(b is None for b in bounds) else max(bounds, default=0)

    def __contains__(self, j):
        return any(j in p for p in self.parts)

    def _compute_upto(self, N):
        return sorted(set().union(*(p.elements_upto(N) for p in self.parts)))

    def to_json(self):
        return {"kind": "union", "parts": [p.to_json() for p in self.parts]}


class DifferenceSequence(IndexSequence):
    kind = "difference"

    def __init__(self, of: IndexSequence, minus: IndexSequence):
        super().__init__()
        self.of = of
        self.minus = minus

    def sup_bound(self):
        return self.of.sup_bound()

    def __contains__(self, j):
        return j in self.of and j not in self.minus

    def _compute_upto(self, N):
        return [j for j in self.of.elements_upto(N) if j not in self.minus]

    def to_json(self):
        if self.of.to_json() == _NAMED["naturals"]:
            return {"kind": "complement", "of": self.minus.to_json()}
        return {"kind": "difference", "of": self.of.to_json(), "minus": self.minus.to_json()}


class ShiftedSequence(IndexSequence):
    """``{j + offset : j in of}`` restricted to positive integers."""

    kind = "shifted"

    def __init__(self, of: IndexSequence, offset: int):
        super().__init__()
        self.of = of
        self.offset = int(offset)

    def sup_bound(self):
        b = self.of.sup_bound()
        return None if b is None else max(0, b + self.offset)

    def __contains__(self, j):
        return j >= 1 and (j - self.offset) in self.of

    def _compute_upto(self, N):
        return [j + self.offset for j in self.of.elements_upto(N - self.offset) if j + self.offset >= 1]

    def to_json(self):
        return {"kind": "shifted", "of": self.of.to_json(), "offset": self.offset}


def parse_sequence(text: str) -> IndexSequence:
    """Accept a registered name (``evens``) or an inline JSON document."""
    import json

    text = text.strip()
    if text.startswith("{"):
        return IndexSequence.from_json(json.loads(text))
    return IndexSequence.named(text)


# ---------------------------------------------------------------------------
# projections and indicators


def _as_set(A: Iterable[int]) -> FrozenSet[int]:
    return A if isinstance(A, frozenset) else frozenset(int(a) for a in A)


def indicator(A: Iterable[int], eps: Optional[Mapping[int, int]] = None) -> SparseVector:
    """Signed indicator sum of eps_i e_i over A; unsigned when eps is None."""
    A = sorted(_as_set(A))
    if eps is None:
        return SparseVector._trusted(tuple(A), (1.0,) * len(A))
    vals = []
    for i in A:
        if i not in eps:
            raise KeyError(f"sign pattern does not cover index {i}")
        s = eps[i]
        if s not in (1, -1):
            raise ValueError(f"signs must be +1 or -1, got {s!r} at {i}")
        vals.append(float(s))
    return SparseVector._trusted(tuple(A), tuple(vals))


def project(x: SparseVector, A: Iterable[int]) -> SparseVector:
    A = _as_set(A)
    return x.restrict(A.__contains__)


def complement_project(x: SparseVector, A: Iterable[int]) -> SparseVector:
    """x - P_A x."""
    A = _as_set(A)
    return x.restrict(lambda i: i not in A)


def prefix_project(x: SparseVector, n: IndexSequence, m: int) -> SparseVector:
    """Projection onto the first m elements of n."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return SparseVector.zero()
    if not n.has_element(m):
        raise IndexError(f"the sequence does not represent {m} elements")
    last = n.element(m)
    return x.restrict(lambda i: i <= last and i in n)


# ---------------------------------------------------------------------------
# admissible pairs


@dataclass(frozen=True)
class AdmissiblePair:
    A: FrozenSet[int]
    B: FrozenSet[int]
    classes: FrozenSet[str] = field(default_factory=frozenset)


@dataclass
class PairContext:
    """Context for pair classification.

    ``s`` is the gap sequence, ``weight`` a callable on finite sets and
    ``lam`` the expansion factor used by the Lambda class.
    """

    n: IndexSequence
    s: Optional[IndexSequence] = None
    weight: Optional[Callable[[FrozenSet[int]], float]] = None
    lam: Optional[float] = None


def set_less(A: Iterable[int], B: Iterable[int]) -> bool:
    """A < B: every element of A is below every element of B; vacuous if either is empty."""
    A = list(A)
    B = list(B)
    if not A or not B:
        return True
    return max(A) < min(B)


def _min_in(B: Iterable[int], n: IndexSequence) -> Optional[int]:
    return min((b for b in B if b in n), default=None)


def _gap_condition(A, B, ctx: PairContext) -> bool:
    # exists s in the gap sequence with A <= n_s < B restricted to n
    if ctx.s is None:
        raise ValueError("class T_n_s needs a gap sequence s in the context")
    n = ctx.n
    a = max(A) if A else 0
    b = _min_in(B, n)
    # smallest s with n_s >= a
    for s in _gap_candidates(ctx.s, n, a):
        ns = n.element(s)
        return b is None or ns < b
    return False


def _gap_candidates(s_seq: IndexSequence, n: IndexSequence, a: int):
    # s_k increasing and n increasing: the first s with n_s >= a is the best candidate
    k = 1
    while s_seq.has_element(k):
        s = s_seq.element(k)
        if not n.has_element(s):
            return
        if n.element(s) >= a:
            yield s
            return
        k += 1


def classify_pair(A: Iterable[int], B: Iterable[int], ctx: PairContext) -> AdmissiblePair:
    A = _as_set(A)
    B = _as_set(B)
    n = ctx.n
    in_n = all(a in n for a in A)
    size_ok = len(A) <= len(B)
    b_n = [b for b in B if b in n]
    ordered = set_less(A, b_n)
    classes = set()
    if in_n and size_ok:
        classes.add("S_n")
        if ordered:
            classes.add("T_n")
        if ctx.s is not None and _gap_condition(A, B, ctx):
            classes.add("T_n_s")
        if ctx.lam is not None and ordered:
            top = n.index_of(max(A)) if A else 0
            if (ctx.lam - 1.0) * top + len(A) <= len(B):
                classes.add("Lambda")
    if in_n and ordered and ctx.weight is not None:
        if ctx.weight(A) <= ctx.weight(B):
            classes.add("T_omega_n")
    return AdmissiblePair(A, B, frozenset(classes))


def count_subsets(size: int, cap: int) -> int:
    return sum(math.comb(size, r) for r in range(0, min(size, cap) + 1))


def subsets_upto(items: Sequence[int], cap: int) -> Iterator[Tuple[int, ...]]:
    """Subsets ordered by (size, lexicographic)."""
    for r in range(0, min(len(items), cap) + 1):
        yield from itertools.combinations(items, r)


def estimate_pairs(n: IndexSequence, N: int, m: int) -> int:
    a_items = len(n.elements_upto(N))
    return count_subsets(a_items, m) * count_subsets(N, m)


def enumerate_pairs(
    n: IndexSequence,
    N: int,
    m: int,
    cls: str,
    ctx: Optional[PairContext] = None,
    guard: int = PAIR_GUARD,
) -> Iterator[AdmissiblePair]:
    """All pairs in class ``cls`` with A, B in [1, N] and |A|, |B| <= m.

    Ordered lexicographically by (|A|, A, |B|, B).
    """
    if cls not in CLASS_NAMES:
        raise ValueError(f"unknown pair class {cls!r}")
    ctx = ctx or PairContext(n=n)
    est = estimate_pairs(n, N, m)
    if est > guard:
        raise InfeasibleEnumeration(f"estimated {est} candidate pairs exceeds the guard {guard}")
    a_items = n.elements_upto(N)
    b_items = tuple(range(1, N + 1))
    b_sets = list(subsets_upto(b_items, m))
    for A in subsets_upto(a_items, m):
        for B in b_sets:
            pair = classify_pair(A, B, ctx)
            if cls in pair.classes:
                yield pair


def parse_vector(text: str, n: Optional[IndexSequence] = None) -> SparseVector:
    """Parse ``"n1:1,n2:-1"`` or ``"1:1,2:0.5"``; symbolic ``n<k>`` needs ``n``."""
    entries = []
    text = text.strip()
    if not text:
        return SparseVector.zero()
    for part in text.split(","):
        key, _, val = part.strip().partition(":")
        if not _:
            raise ValueError(f"malformed entry {part!r}; expected index:coefficient")
        key = key.strip()
        if key.startswith("n"):
            if n is None:
                raise ValueError("symbolic indices need an index sequence")
            idx = n.element(int(key[1:]))
        else:
            idx = int(key)
        entries.append((idx, float(val)))
    return SparseVector(entries)
