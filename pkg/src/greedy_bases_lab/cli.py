"""Command line: ``gbl eval``, ``gbl table`` and ``gbl verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import List, Optional, Sequence

from .core import InfeasibleEnumeration, PairContext, SparseVector, parse_sequence, parse_vector
from .greedy import fmt
from .norms import NormConfigError, evaluate, get_norm
from .parameters import (ParameterReport, conservative_constant, kappa, lebesgue_parameter, omega_parameter,
                         quasi_greedy_parameters, sc_parameter)
from .suite import SUITES, run_suite

CSV_HEADER = "# greedy-bases-lab v1"
PARAMS = ("sc", "omega", "lebesgue", "g", "gc", "gtilde", "conservative", "democratic", "kappa")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def parse_range(text: str) -> List[int]:
    """``"3"`` or ``"1..4"`` (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise ConfigError(f"bad m range {text!r}; expected k or a..b") from None
    if a < 1 or b < a:
        raise ConfigError(f"bad m range {text!r}")
    return list(range(a, b + 1))


def worker_cap() -> int:
    raw = os.environ.get("GBL_THREADS", "1")
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"GBL_THREADS must be a positive integer, got {raw!r}") from None
    if v < 1:
        raise ConfigError(f"GBL_THREADS must be a positive integer, got {raw!r}")
    return v


def _load_norm(args):
    n = None
    if getattr(args, "n", None):
        try:
            n = parse_sequence(args.n)
        except (KeyError, ValueError) as e:
            raise ConfigError(f"bad sequence {args.n!r}: {e}") from None
    try:
        spec = get_norm(args.norm, n)
    except FileNotFoundError:
        raise ConfigError(f"unknown norm {args.norm!r}") from None
    except (NormConfigError, ValueError, KeyError) as e:
        raise ConfigError(f"invalid norm {args.norm!r}: {e}") from None
    if getattr(args, "lam", None) is not None:
        if args.lam <= 1:
            raise ConfigError("lambda must exceed 1")
        if spec.family != "lambda_weight":
            raise ConfigError("--lam only applies to the lambda norm")
        doc = dict(spec.doc, params=dict(spec.doc["params"], lam=args.lam))
        doc["sequences"] = dict(doc["sequences"])
        doc["sequences"]["n_prime_positions"] = dict(doc["sequences"]["n_prime_positions"], lam=args.lam)
        spec = get_norm(json.dumps(doc), n)
    return spec


def _jsonable(obj):
    if isinstance(obj, SparseVector):
        return obj.to_literal()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, float):
        return float(fmt(obj)) if obj == obj and abs(obj) != float("inf") else fmt(obj)
    return obj


def cmd_eval(args) -> int:
    spec = _load_norm(args)
    try:
        x = parse_vector(args.vector, spec.n)
    except (ValueError, IndexError) as e:
        raise ConfigError(f"bad vector {args.vector!r}: {e}") from None
    try:
        val = evaluate(x, spec)
    except (NormConfigError, ValueError) as e:
        raise ConfigError(str(e)) from None
    print(fmt(val.value))
    if args.format == "csv":
        print(f"witness,{json.dumps(_jsonable(val.witness), sort_keys=True)}")
    else:
        print(f"witness: {json.dumps(_jsonable(val.witness), sort_keys=True)}")
    return EXIT_OK


def _table_reports(spec, args) -> List[ParameterReport]:
    p = args.param
    if p in ("conservative", "democratic"):
        cls = "S_n" if p == "democratic" else "T_n"
        return [conservative_constant(spec, args.window or 20, args.cap, cls=cls, ctx=PairContext(n=spec.n))]
    if p == "kappa":
        return [kappa(spec, args.window or 12)]
    out = []
    for m in parse_range(args.m):
        if p == "sc":
            out.append(sc_parameter(spec, m, args.window))
        elif p == "omega":
            out.append(omega_parameter(spec, m))
        elif p == "lebesgue":
            out.append(lebesgue_parameter(spec, m))
        else:
            out.append(quasi_greedy_parameters(spec, m)[p])
    return out


def _rows(reports: Sequence[ParameterReport]):
    for r in reports:
        yield ["" if r.m is None else r.m, fmt(r.value), r.kind, r.digest()]


def cmd_table(args) -> int:
    spec = _load_norm(args)
    try:
        reports = _table_reports(spec, args)
    except InfeasibleEnumeration as e:
        print(f"infeasible enumeration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    cols = ["m", "value", "kind", "witness"]
    rows = list(_rows(reports))
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(rows)
        sys.stdout.write(CSV_HEADER + "\n" + buf.getvalue())
    elif args.format == "text":
        for r in reports:
            print(f"param={r.name} norm={r.norm_id} n={r.n_id} m={'' if r.m is None else r.m} value={fmt(r.value)} "
                  f"kind={r.kind} witness={r.digest()}")
    else:
        widths = [max(len(str(c)), *(len(str(row[i])) for row in rows)) for i, c in enumerate(cols)]
        print("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip())
        for row in rows:
            print("  ".join(str(v).ljust(wd) for v, wd in zip(row, widths)).rstrip())
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = 0
    for res in run_suite(args.suite):
        print(res.line())
        for d in res.details:
            print(f"    {d}")
        failed += not res.passed
    print(f"{'FAIL' if failed else 'PASS'} suite {args.suite}: {failed} failing check(s)")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gbl", description="Greedy-basis norms, parameters and property checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt_default):
        p.add_argument("--norm", required=True, help="catalog id, JSON file or inline JSON")
        p.add_argument("--n", help="index sequence: registered name or inline JSON")
        p.add_argument("--lam", type=float, help="expansion factor for the lambda norm")
        p.add_argument("--format", choices=("csv", "text", "pretty"), default=fmt_default)

    e = sub.add_parser("eval", help="evaluate a norm on a vector")
    common(e, "text")
    e.add_argument("--vector", required=True, help='literal like "n1:1,n2:-1" or "1:1,4:0.5"')
    e.add_argument("--witness", action="store_true", help="kept for compatibility; the witness is always printed")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="parameter values over a range of m")
    common(t, "csv")
    t.add_argument("--param", required=True, choices=PARAMS)
    t.add_argument("--m", default="1..4", help="k or a..b")
    t.add_argument("--window", type=int, help="index window for exhaustive searches")
    t.add_argument("--cap", type=int, default=6, help="set size cap for conservative/democratic")
    t.add_argument("--seed", type=int, default=None, help="accepted for reproducibility; libraries use a fixed seed")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=tuple(SUITES), default="paper")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        worker_cap()
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
