import itertools
import math
import zlib
import random

import pytest

from greedy_bases_lab import norms
from greedy_bases_lab.core import SparseVector, indicator, project
from greedy_bases_lab.norms import NormConfigError, catalog_ids, evaluate, get_norm, norm
from greedy_bases_lab.oracles import (brute_rearrangement, compare_norm, has_suprema, oracle_library, oracle_norm)


def isqrt_sum(N, p=0.5):
    return math.fsum(i ** -p for i in range(1, N + 1))


def e(*idx):
    return indicator(idx)


# -- concrete values ---------------------------------------------------------

def test_l1l2_value():
    assert norm(e(1, 2, 4), get_norm("l1l2")) == pytest.approx(1 + math.sqrt(2), abs=1e-12)


def test_m2_values():
    spec = get_norm("m2")
    n = spec.n
    assert norm(e(1, 3, 5, 7), spec) == 4.0
    want = 1 + 1 / math.sqrt(2) + 1 / math.sqrt(3)
    assert norm(e(*n.prefix(3)), spec) == pytest.approx(want, abs=1e-12)
    # the same value by trying all 3! pairings
    assert brute_rearrangement([1.0, 1.0, 1.0], "inv_sqrt") == pytest.approx(want, abs=1e-12)


def test_m3_values():
    spec = get_norm("m3")
    n = spec.n
    assert norm(e(*(n.element(i) for i in range(1, 5))), spec) == pytest.approx(1.0)
    assert norm(e(*(n.element(i) for i in range(4, 9))), spec) == pytest.approx(1 + 1 / math.sqrt(2))


def test_m14_lower_bound_on_subsequences():
    spec = get_norm("m14")
    rng = random.Random(7)
    for N in (1, 4, 9, 16, 30):
        A = sorted(rng.sample(range(1, 200), N))
        assert norm(e(*A), spec) >= math.sqrt(N) - 1e-12


def test_summing_values():
    spec = get_norm("summing")
    n = spec.n
    assert norm(SparseVector({n.element(1): 1, n.element(2): -1}), spec) == 1.0
    for s in range(2, 8):
        y = SparseVector({n.element(s - 1): -1, n.element(s): 2})
        assert norm(y, spec) == 1.0
    m = 2
    A = [n.element(i) for i in range(1, m + 1)]
    C = ([n.element(m + 1 + 3 * i) for i in range(m)] + [n.element(m + 3 + 3 * i) for i in range(m)]
         + [n.element(4 * m + 1)])
    assert norm(indicator(C) * 0.5 + indicator(A), spec) == 4.5


def test_split_values():
    spec = get_norm("split")
    n = spec.n
    for m in range(1, 6):
        assert norm(e(*(n.element(2 * i - 1) for i in range(1, m + 1))), spec) == m
        assert norm(e(*(n.element(i) for i in range(2 * m + 2, 4 * m + 1, 2))), spec) == 1.0
    assert all(norm(SparseVector.unit(k), spec) == 1.0 for k in range(1, 30))


def test_gap_order_blocks():
    spec = get_norm("gap_order")
    n, s = spec.n, spec.seq("s")
    for j in (1, 2, 3):
        sk = s.element(j)
        D = [n.element(i) for i in range(sk + 1, (j + 1) * sk + 1)]
        E = [n.element(i) for i in range((j + 1) * sk + 1, 2 * (j + 1) * sk + 1)]
        if E[-1] > spec.params["window"]:
            break
        assert norm(e(*D), spec) == j * sk
        assert norm(e(*E), spec) <= sk


def test_gap_pk_blocks():
    spec = get_norm("gap_pk")
    n, s = spec.n, spec.seq("s")
    p = lambda k: norms.gap_pk_exponent(spec, k)
    for j in (1, 2, 3):
        sk = s.element(j)
        T = [n.element(sk + i) for i in range(1, 10 ** j + 1)]
        D = [n.element(sk + 10 ** j + i) for i in range(1, 10 ** j + 1)]
        if D[-1] > spec.params["window"]:
            break
        assert norm(e(*T), spec) >= 10 ** (j / p(j + 1)) * (1 - 1e-12)
        assert norm(e(*D), spec) <= 10 ** (j / p(j)) * (1 + 1e-12)


def test_gap_norms_reject_support_beyond_window():
    for nid in ("gap_order", "gap_pk"):
        spec = get_norm(nid)
        with pytest.raises(NormConfigError):
            norm(SparseVector.unit(spec.params["window"] + 1), spec)


def test_lambda_values():
    spec = get_norm("lambda")
    sub = spec.seq("n_prime")
    B = [j for j in range(1, 80) if j in spec.n and j not in sub][:6]
    assert norm(e(*B), spec) == pytest.approx(isqrt_sum(6, 1), abs=1e-12)
    A = sub.prefix(5)
    assert norm(e(*A), spec) == pytest.approx(isqrt_sum(5), abs=1e-12)
    assert all(norm(SparseVector.unit(k), spec) == 1.0 for k in range(1, 40))


def test_witness_is_recorded():
    v = evaluate(e(2, 4, 6), get_norm("m2"))
    assert v.witness["detail"][0]["pairing"] == [2, 4, 6]
    v = evaluate(SparseVector({2: 1, 4: 1, 6: -3}), get_norm("summing"))
    assert v.witness["at"] == 4 and v.value == 2.0


# -- brute-force oracles -------------------------------------------------------

SUPREMUM_NORMS = [nid for nid in catalog_ids() if has_suprema(get_norm(nid))]


def test_every_supremum_family_has_an_oracle():
    assert {"m2", "m3", "m4", "m8_case2", "m14", "lambda", "pe1", "weighted_odd"} <= set(SUPREMUM_NORMS)


@pytest.mark.parametrize("nid", SUPREMUM_NORMS)
def test_evaluator_matches_brute_force(nid):
    assert compare_norm(get_norm(nid), oracle_library()) is None


def test_ascending_pairing_is_caught(monkeypatch):
    def ascending(moduli, weights):
        order = sorted(range(len(moduli)), key=lambda i: moduli[i])
        return math.fsum(w * moduli[i] for w, i in zip(weights, order)), order

    monkeypatch.setattr(norms, "pair_sorted", ascending)
    bad = compare_norm(get_norm("m2"), oracle_library())
    assert bad is not None
    x, fast, slow = bad
    assert fast < slow


def test_oracle_handles_tied_moduli():
    spec = get_norm("m4")
    x = SparseVector({4: 1, 8: 1, 12: 1, 2: 0.5, 6: 0.5, 1: 1})
    assert norm(x, spec) == pytest.approx(oracle_norm(x, spec), abs=1e-12)


# -- axioms --------------------------------------------------------------------

def _sample(seed, count=500, window=14):
    rng = random.Random(seed)
    for _ in range(count):
        S = rng.sample(range(1, window + 1), rng.randint(1, 6))
        yield SparseVector({i: rng.uniform(-2, 2) for i in S})


@pytest.mark.parametrize("nid", catalog_ids())
def test_norm_axioms(nid):
    spec = get_norm(nid)
    assert norm(SparseVector.zero(), spec) == 0.0
    xs = list(_sample(zlib.crc32(nid.encode())))
    for x, y in zip(xs, xs[1:]):
        nx = norm(x, spec)
        assert nx > 0
        assert abs(norm(x * -2.5, spec) - 2.5 * nx) <= 1e-12 * max(1.0, nx) * 4
        assert norm(x + y, spec) <= nx + norm(y, spec) + 1e-9


@pytest.mark.parametrize("nid", [i for i in catalog_ids() if get_norm(i).flags.one_unconditional])
def test_unconditional_projections(nid):
    spec = get_norm(nid)
    rng = random.Random(3)
    for _ in range(60):
        S = rng.sample(range(1, 17), rng.randint(1, 8))
        x = SparseVector({i: rng.uniform(-1, 1) for i in S})
        nx = norm(x, spec)
        for r in range(len(S) + 1):
            for A in itertools.combinations(S, r):
                assert norm(project(x, A), spec) <= nx + 1e-12


@pytest.mark.parametrize("nid", [i for i in catalog_ids() if get_norm(i).flags.normalized])
def test_normalized(nid):
    spec = get_norm(nid)
    for k in range(1, 40):
        assert norm(SparseVector.unit(k), spec) == pytest.approx(1.0, abs=1e-12)


def test_m14_is_not_normalized():
    assert norm(SparseVector.unit(3), get_norm("m14")) == 2.0


# -- configuration -------------------------------------------------------------

def test_unknown_norm():
    with pytest.raises(FileNotFoundError):
        get_norm("no-such-norm")


def test_bad_config_is_rejected():
    doc = {"id": "bad", "family": "partitioned_rearrangement", "sequences": {"n": {"kind": "arithmetic", "first": 2, "step": 2}},
           "params": {"combiner": "sum", "blocks": [{"select": "in:n", "mode": "lp", "p": 1}]},
           "flags": {"one_unconditional": True, "one_pslc_expected": False, "normalized": True, "sign_invariant": True}}
    import json
    spec = get_norm(json.dumps(doc))
    with pytest.raises(NormConfigError):
        norm(SparseVector.unit(1), spec)


def test_gap_growth_condition_checked():
    import json
    doc = dict(norms.catalog_docs()["gap_order"])
    doc["sequences"] = dict(doc["sequences"], s={"kind": "list", "elements": [1, 2, 3, 4, 5]})
    with pytest.raises(NormConfigError):
        get_norm(json.dumps(doc))


def test_override_n():
    from greedy_bases_lab.core import IndexSequence
    spec = get_norm("summing", IndexSequence.named("odds"))
    assert norm(SparseVector({1: 1, 3: -1}), spec) == 1.0
