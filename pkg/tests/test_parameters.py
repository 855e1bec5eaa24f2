import itertools
import math

import pytest

from greedy_bases_lab.core import (ArithmeticSequence, InfeasibleEnumeration, PairContext, SparseVector, enumerate_pairs,
                                   indicator)
from greedy_bases_lab.norms import get_norm, norm
from greedy_bases_lab.parameters import (InvalidWitness, check_omega_witness, conservative_constant,
                                         dual_coordinate_norm, kappa, lebesgue_parameter, omega_witness_triple,
                                         omega_parameter, quasi_greedy_parameters, sc_parameter,
                                         verify_lebesgue_bounds, witness_value)


def brute_pair_sup(spec, window, cap, cls="T_n", ctx=None):
    """Naive loop over classified pairs and every sign pattern."""
    n = spec.n
    best = 0.0
    for p in enumerate_pairs(n, window, cap, cls, ctx):
        if not p.B:
            continue
        A, B = sorted(p.A), sorted(p.B)
        num = max(norm(indicator(A, dict(zip(A, e))), spec) for e in itertools.product((1, -1), repeat=len(A)))
        den = min(norm(indicator(B, dict(zip(B, d))), spec) for d in itertools.product((1, -1), repeat=len(B)))
        best = max(best, num / den)
    return best


@pytest.mark.parametrize("nid", ["summing", "split", "m2", "l1l2", "e112"])
@pytest.mark.parametrize("cls", ["T_n", "S_n"])
def test_pair_supremum_matches_naive_loop(nid, cls):
    spec = get_norm(nid)
    r = conservative_constant(spec, 9, 3, cls=cls)
    assert r.value == pytest.approx(brute_pair_sup(spec, 9, 3, cls), abs=1e-12)
    assert witness_value(r, spec) == pytest.approx(r.value, abs=1e-12)
    assert isinstance(r.value, float)


def test_weighted_class_matches_naive_loop():
    from greedy_bases_lab.properties import Weight
    spec = get_norm("m2")
    ctx = PairContext(n=spec.n, weight=Weight.norm_induced(get_norm("l1")))
    r = conservative_constant(spec, 8, 3, cls="T_omega_n", ctx=ctx)
    assert r.value == pytest.approx(brute_pair_sup(spec, 8, 3, "T_omega_n", ctx), abs=1e-12)


def test_guard():
    with pytest.raises(InfeasibleEnumeration):
        conservative_constant(get_norm("l1"), 60, 12)


def test_democratic_name():
    assert conservative_constant(get_norm("l1"), 6, 2, cls="S_n").name == "democratic"


def test_l1l2_conservative_is_one():
    assert conservative_constant(get_norm("l1l2"), 12, 4).value == 1.0


def test_m2_pairs_inside_n_are_balanced():
    spec = get_norm("m2")
    assert conservative_constant(spec, 12, 4, cls="S_n").value == 1.0


def test_m2_not_conservative_over_naturals():
    # D off n against E inside n to its right: ratio N / sum of i^-1/2
    from greedy_bases_lab.core import IndexSequence
    spec = get_norm("m2")
    nat = IndexSequence.named("naturals")
    ratios = [conservative_constant(spec, 4 * N, N, n=nat).value for N in (2, 3, 4)]
    want = [N / sum(i ** -0.5 for i in range(1, N + 1)) for N in (2, 3, 4)]
    assert all(r >= w - 1e-12 for r, w in zip(ratios, want))
    assert ratios[0] < ratios[1] < ratios[2]


def test_split_sc():
    spec = get_norm("split")
    for order, want in ((1, 1), (2, 1), (3, 2), (4, 2)):
        r = sc_parameter(spec, order)
        assert r.value == want and r.kind == "exact_enumeration"
        assert witness_value(r, spec) == want


def test_summing_omega_closed_form():
    spec = get_norm("summing")
    for m in (1, 2, 3):
        r = omega_parameter(spec, m)
        assert r.value == 4 * m + 1 and r.reference == 4 * m + 1
        assert witness_value(r, spec) == 4 * m + 1
        assert r.extra["omega_hat"] >= 1


def test_omega_witness_checks():
    n = ArithmeticSequence(2, 2)
    w = omega_witness_triple(n, 2)
    check_omega_witness(n, 2, w)
    bad = dict(w, A=(n.element(3),), eps={n.element(3): 1})
    with pytest.raises(InvalidWitness):
        check_omega_witness(n, 2, bad)
    with pytest.raises(InvalidWitness):
        check_omega_witness(n, 2, dict(w, x=w["x"] * 4))
    with pytest.raises(InvalidWitness):
        check_omega_witness(n, 2, dict(w, B=w["B"] + (n.element(30),)))


def test_omega_l1_is_one():
    assert omega_parameter(get_norm("l1"), 2).value == pytest.approx(1.0)


def test_lebesgue_summing_first_order():
    spec = get_norm("summing")
    r = lebesgue_parameter(spec, 1)
    assert r.value == pytest.approx(5.0, abs=1e-9)
    assert witness_value(r, spec) == pytest.approx(r.value, abs=1e-12)


def test_lebesgue_split():
    spec = get_norm("split")
    for order in range(1, 5):
        assert lebesgue_parameter(spec, order).value >= ((order + 1) // 2 + 1) / (1 + 1e-6)


def test_quasi_greedy_summing():
    q = quasi_greedy_parameters(get_norm("summing"), 1)
    assert q["g"].value == pytest.approx(2.0)
    assert q["gc"].value == pytest.approx(1.0)
    assert q["g"].kind == "lower_bound_witness"


def test_quasi_greedy_unconditional_exact():
    q = quasi_greedy_parameters(get_norm("split"), 2)
    assert all(q[k].value == 1.0 and q[k].kind == "exact_enumeration" for k in q)


def test_duals_summing():
    spec = get_norm("summing")
    n = spec.n
    for k, want in [(1, 1.0), (3, 1.0), (n.element(1), 1.0)] + [(n.element(s), 2.0) for s in range(2, 9)]:
        r = dual_coordinate_norm(spec, k)
        assert r.value == pytest.approx(want, abs=1e-9) and r.reference == want
        assert witness_value(r, spec) == pytest.approx(r.value)


def test_duals_lattice():
    spec = get_norm("m14")
    r = dual_coordinate_norm(spec, 3)
    assert r.reference == 0.5 and r.value == pytest.approx(0.5)


def test_kappa():
    assert kappa(get_norm("summing"), 12).value == 2.0
    assert kappa(get_norm("split"), 12).value == 1.0
    assert kappa(get_norm("m14"), 12).value == 1.0


def test_bounds_summing():
    rep = verify_lebesgue_bounds(get_norm("summing"), 2)
    assert rep.ok
    assert rep.upper[1] == 5.0 and rep.tight[1]


def test_bounds_split_tight():
    rep = verify_lebesgue_bounds(get_norm("split"), 4)
    assert rep.ok and all(rep.tight.values())
    assert [rep.upper[m] for m in range(1, 5)] == [2.0, 2.0, 3.0, 3.0]


def test_digest_formats():
    spec = get_norm("split")
    r = sc_parameter(spec, 3)
    num, den = r.digest().split("/")
    assert "," in num or ":" in num
    d = dual_coordinate_norm(get_norm("summing"), 4).digest()
    assert d.startswith("x=") and d.endswith(";k=4")
