import csv
import io
import math

import pytest

from greedy_bases_lab import cli
from greedy_bases_lab.core import parse_vector
from greedy_bases_lab.norms import get_norm, norm


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_examples(capsys):
    code, out, _ = run(capsys, "eval", "--norm", "summing", "--n", "evens", "--vector", "n1:1,n2:-1")
    assert code == 0 and out.splitlines()[0] == "1.0"
    assert out.splitlines()[1].startswith("witness:")
    code, out, _ = run(capsys, "eval", "--norm", "l1l2", "--vector", "1:1,2:1,4:1")
    assert float(out.splitlines()[0]) == pytest.approx(1 + math.sqrt(2), abs=1e-11)
    code, out, _ = run(capsys, "eval", "--norm", "split", "--vector", "n1:1")
    assert out.splitlines()[0] == "1.0"


def test_eval_errors(capsys):
    code, _, err = run(capsys, "eval", "--norm", "missing", "--vector", "1:1")
    assert code == 2 and "unknown norm" in err
    code, _, err = run(capsys, "eval", "--norm", "l1", "--vector", "1:oops")
    assert code == 2
    code, _, _ = run(capsys, "eval", "--norm", "l1", "--n", "no-such-seq", "--vector", "1:1")
    assert code == 2
    code, _, _ = run(capsys, "eval", "--norm", "lambda", "--lam", "1", "--vector", "1:1")
    assert code == 2


def test_eval_lambda_override(capsys):
    code, out, _ = run(capsys, "eval", "--norm", "lambda", "--lam", "3", "--vector", "1:1,2:1")
    assert code == 0 and float(out.splitlines()[0]) == pytest.approx(1.5)


def _table(out):
    lines = out.splitlines()
    assert lines[0] == "# greedy-bases-lab v1"
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_table_sc_split(capsys):
    code, out, _ = run(capsys, "table", "--param", "sc", "--norm", "split", "--m", "1..4")
    rows = _table(out)
    assert code == 0
    assert [(int(r["m"]), float(r["value"])) for r in rows] == [(1, 1.0), (2, 1.0), (3, 2.0), (4, 2.0)]
    assert all(r["kind"] == "exact_enumeration" for r in rows)


def test_table_omega_summing(capsys):
    code, out, _ = run(capsys, "table", "--param", "omega", "--norm", "summing", "--m", "1..3")
    assert [float(r["value"]) for r in _table(out)] == [5.0, 9.0, 13.0]


def test_table_conservative(capsys):
    code, out, _ = run(capsys, "table", "--param", "conservative", "--norm", "l1l2", "--window", "20")
    rows = _table(out)
    assert len(rows) == 1 and rows[0]["value"] == "1.0"


def test_table_guard_exit(capsys):
    code, _, err = run(capsys, "table", "--param", "conservative", "--norm", "l1", "--window", "60", "--cap", "12")
    assert code == 2 and "infeasible" in err


def test_table_is_deterministic(capsys):
    args = ("table", "--param", "lebesgue", "--norm", "summing", "--m", "1..2")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize("param,nid", [("sc", "split"), ("omega", "summing"), ("g", "summing"),
                                       ("gc", "summing"), ("lebesgue", "split"), ("democratic", "m2")])
def test_digest_reevaluates(capsys, param, nid):
    extra = ("--window", "10", "--cap", "3") if param == "democratic" else ()
    code, out, _ = run(capsys, "table", "--param", param, "--norm", nid, "--m", "1..2", *extra)
    spec = get_norm(nid)
    for row in _table(out):
        num, den = row["witness"].split("/")
        ratio = norm(parse_vector(num), spec) / norm(parse_vector(den), spec)
        # both sides go through the same 12-digit rendering
        assert cli.fmt(ratio) == row["value"]


def test_table_formats(capsys):
    code, out, _ = run(capsys, "table", "--param", "kappa", "--norm", "summing", "--format", "text")
    assert "value=2.0" in out and "kind=paper_closed_form" in out
    code, out, _ = run(capsys, "table", "--param", "sc", "--norm", "split", "--m", "1..2", "--format", "pretty")
    assert out.splitlines()[0].split() == ["m", "value", "kind", "witness"]


def test_bad_range(capsys):
    code, _, err = run(capsys, "table", "--param", "sc", "--norm", "split", "--m", "4..2")
    assert code == 2


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("GBL_THREADS", "zero")
    code, _, err = run(capsys, "eval", "--norm", "l1", "--vector", "1:1")
    assert code == 2 and "GBL_THREADS" in err
    monkeypatch.setenv("GBL_THREADS", "4")
    assert run(capsys, "eval", "--norm", "l1", "--vector", "1:1")[0] == 0


def test_verify_oracles(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "oracles")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS criterion-6")


def test_verify_catches_ascending_pairing(capsys, monkeypatch):
    from greedy_bases_lab import norms

    def ascending(moduli, weights):
        order = sorted(range(len(moduli)), key=lambda i: moduli[i])
        return math.fsum(w * moduli[i] for w, i in zip(weights, order)), order

    monkeypatch.setattr(norms, "pair_sorted", ascending)
    code, out, _ = run(capsys, "verify", "--suite", "oracles")
    assert code == 1
    assert any(line.strip().startswith("m2: disagrees") for line in out.splitlines())
