import itertools
import math
import random

import pytest

from greedy_bases_lab.core import ArithmeticSequence, SparseVector, complement_project
from greedy_bases_lab.greedy import (GreedyOverflowError, PROFILE_COLUMNS, error_ratio, fmt, greedy_error, greedy_sets,
                                     profile_csv, reference_errors, sigma_hat, tga_error_profile, truncate)
from greedy_bases_lab.norms import get_norm, norm
from greedy_bases_lab.oracles import brute_greedy_sets, compare_greedy, oracle_library

EVENS = ArithmeticSequence(2, 2)


def test_greedy_sets_match_subset_filter():
    assert compare_greedy(oracle_library(200), 14, 5) is None


def test_greedy_sets_with_ties():
    x = SparseVector({1: 1.0, 2: -1.0, 3: 1.0, 5: 0.5})
    fam = greedy_sets(x, 2)
    assert set(fam.sets) == {frozenset(c) for c in itertools.combinations([1, 2, 3], 2)}
    assert fam.threshold == 1.0 and not fam.padded


def test_greedy_sets_padding():
    x = SparseVector({2: 1.0})
    rep = greedy_sets(x, 3, window=5)
    assert rep.padded and len(rep.sets) == 1 and 2 in next(iter(rep.sets))
    full = greedy_sets(x, 3, window=5, pad="all")
    assert set(full.sets) == brute_greedy_sets(x, 3, 5)


def test_greedy_sets_errors():
    x = SparseVector({9: 1.0})
    with pytest.raises(ValueError):
        greedy_sets(x, 1, window=5)
    with pytest.raises(ValueError):
        greedy_sets(SparseVector({1: 1.0}), 6, window=5)
    with pytest.raises(GreedyOverflowError):
        greedy_sets(SparseVector({i: 1.0 for i in range(1, 21)}), 10, cap=1000)


def test_truncate():
    x = SparseVector({1: 3.0, 2: -0.5, 3: -2.0})
    assert truncate(x, 1.0) == SparseVector({1: 1.0, 2: -0.5, 3: -1.0})
    with pytest.raises(ValueError):
        truncate(x, 0)


def test_greedy_error_is_worst_tie():
    spec = get_norm("summing")
    # removing e_4 leaves |partial sum| 2, removing e_2 leaves 1
    x = SparseVector({2: 1.0, 4: -1.0, 6: 1.0})
    val, G = greedy_error(x, spec, 1)
    want = max(norm(complement_project(x, [k]), spec) for k in (2, 4, 6))
    assert val == want and len(G) == 1


# brute-force reference errors on a window

def _brute_tilde(x, spec, n, m, window):
    on = [i for i in range(1, window + 1) if i in n]
    return min(norm(complement_project(x, A), spec) for r in range(m + 1) for A in itertools.combinations(on, r))


def _brute_check(x, spec, n, m, window):
    best = norm(x, spec)
    k = 0
    while n.element(k + 1) <= window:
        best = min(best, norm(complement_project(x, [n.element(k + i) for i in range(1, m + 1)]), spec))
        k += 1
    return best


def _brute_bar(x, spec, n, m, window):
    # intervals of n, any length, meeting supp(x) in at most m points
    on = [i for i in range(1, window + 1) if i in n]
    best = norm(x, spec)
    for a in range(len(on)):
        for b in range(a, len(on)):
            block = on[a:b + 1]
            if sum(1 for i in block if x[i] != 0) <= m:
                best = min(best, norm(complement_project(x, block), spec))
    return best


@pytest.mark.parametrize("nid", ["summing", "split", "m2", "l1l2"])
def test_reference_errors_match_brute_force(nid):
    spec = get_norm(nid)
    rng = random.Random(11)
    for _ in range(40):
        S = rng.sample(range(1, 13), rng.randint(1, 5))
        x = SparseVector({i: rng.choice((0.5, 1.0, -1.0, 2.0)) for i in S})
        for m in range(0, 4):
            ref = reference_errors(x, spec, EVENS, m)
            assert ref.sigma_tilde == pytest.approx(_brute_tilde(x, spec, EVENS, m, 14), abs=1e-12)
            assert ref.sigma_check == pytest.approx(_brute_check(x, spec, EVENS, m, 14 + 2 * m), abs=1e-12)
            assert ref.sigma_bar == pytest.approx(_brute_bar(x, spec, EVENS, m, 14), abs=1e-12)
            assert ref.sigma_tilde <= ref.sigma_hat + 1e-12


def test_sigma_hat_prefix():
    spec = get_norm("split")
    x = SparseVector({2: 1.0, 4: 1.0, 6: 1.0})
    # k = 0 leaves 2 on the odd positions; k = 1 and k = 2 both leave 1, the first is kept
    assert sigma_hat(x, spec, EVENS, 0) == (2.0, 0)
    assert sigma_hat(x, spec, EVENS, 2) == (1.0, 1)


def test_error_ratio_conventions():
    assert error_ratio(2.0, 1.0) == 2.0
    assert error_ratio(1.0, 0.0, 1e-6) == math.inf
    assert math.isnan(error_ratio(0.0, 0.0, 1e-6))


def test_profile_csv():
    spec = get_norm("summing")
    x = SparseVector({2: 1.0, 4: -1.0, 5: 0.5})
    rows = tga_error_profile(x, spec, None, 3)
    text = profile_csv(rows)
    lines = text.splitlines()
    assert lines[0] == ",".join(PROFILE_COLUMNS)
    assert len(lines) == 5
    assert rows[0].gamma == norm(x, spec)
    assert text == profile_csv(tga_error_profile(x, spec, None, 3))


def test_fmt():
    assert fmt(1.0) == "1.0"
    assert fmt(1 + math.sqrt(2)) == "2.41421356237"
    assert fmt(math.inf) == "inf" and fmt(math.nan) == "nan"
    assert fmt(1e20) == "1e+20"
