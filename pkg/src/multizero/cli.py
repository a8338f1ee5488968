"""Command-line front end.

    multizero bound  --exponents 4,1 --r 3 --sizes 5,5 --method all
    multizero table  --table t1 --check --out results/
    multizero verify --mode dominance --max-q 16 --max-r 5 --max-m 4

Exit codes: 0 success, 1 verification failure or table mismatch,
2 usage error, 3 method not applicable to the query.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from multizero import experiments as ex
from multizero import verify
from multizero.bounds import BoundQuery, d_bound, sz_gen_bound, trivial_full_grid
from multizero.closed_forms import ConditionAViolated, condition_a_holds, small_exponent_bound, two_var_upper
from multizero.linear_products import NoLinearProductError, h_bound, equality_prediction

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INAPPLICABLE = 0, 1, 2, 3


class Inapplicable(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _fmt(value) -> str | int:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    return value


def _emit(payload: dict, fmt: str, lines: Sequence[str]) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        for line in lines:
            print(line)


# -- bound ---------------------------------------------------------------------

def _bound_values(query: BoundQuery, method: str, with_witness: bool) -> dict:
    out: dict = {}
    if method in ("d", "all"):
        out["D"] = d_bound(query)
    if method in ("h", "all"):
        try:
            h, witness = h_bound(query)
            out["H"] = h
            if with_witness or method == "h":
                out["witness"] = [list(v) for v in witness]
        except NoLinearProductError as exc:
            if method == "h":
                raise Inapplicable(str(exc)) from exc
            out["H"] = None
    if method in ("szgen", "all"):
        out["szgen"] = sz_gen_bound(query)
    if method == "closed2" or (method == "all" and query.m == 2):
        if query.m != 2:
            raise Inapplicable(f"closed2 needs exactly two variables, got {query.m}")
        value, case, k = two_var_upper(*query.exponents, query.r, *query.sizes)
        out["closed2"] = _fmt(value)
        out["case"] = case.value if k is None else f"{case.value}(k={k})"
    if method == "small" or (method == "all" and query.m >= 2 and condition_a_holds(query)):
        if query.m < 2:
            raise Inapplicable("the small-exponent bound needs at least two variables")
        try:
            out["small"] = _fmt(small_exponent_bound(query))
        except ConditionAViolated as exc:
            raise Inapplicable(str(exc)) from exc
    if method == "all":
        out["trivial_full_grid"] = trivial_full_grid(query)
        pred = equality_prediction(query)
        if pred is not None:
            out["equality"] = {"value": pred[0], "rule": pred[1]}
    return out


def cmd_bound(args: argparse.Namespace) -> int:
    try:
        query = BoundQuery(args.exponents, args.r, args.sizes)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        values = _bound_values(query, args.method, args.witness)
    except Inapplicable as exc:
        print(f"not applicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    if args.method != "all" and len(values) == 1:
        lines = [str(next(iter(values.values())))]
    else:
        lines = [" ".join(f"{k}={v}" for k, v in values.items())]
    payload = {"query": {"exponents": query.exponents, "r": query.r, "sizes": query.sizes}, **values}
    _emit(payload, args.format, lines)
    return EXIT_OK


# -- table ---------------------------------------------------------------------

def _parse_cells(args: argparse.Namespace, spec: ex.TableSpec) -> list[tuple[int, int, int]]:
    cells = list(spec.stat_cells)
    if args.m:
        cells = [c for c in cells if c[0] in args.m]
    if args.q:
        cells = [c for c in cells if c[1] in args.q]
    if args.r:
        cells = [c for c in cells if c[2] in args.r]
    if args.m and args.q and args.r:
        cells = sorted({(m, q, r) for m in args.m for q in args.q for r in args.r})
    elif not args.include_slow:
        cells = [c for c in cells if c not in ex.SLOW_STAT_CELLS]
    return cells


def cmd_table(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    if args.table:
        spec = ex.TABLES[args.table]
    elif args.stat:
        spec = ex.TableSpec(f"custom_{args.stat}", args.stat, 0,
                            rounding="ceil" if args.stat == "mean_gap" else "truncate")
        if not (args.m and args.q and args.r):
            print("error: --stat needs --m, --q and --r", file=sys.stderr)
            return EXIT_USAGE
    else:
        print("error: give --table or --stat", file=sys.stderr)
        return EXIT_USAGE
    if args.rounding:
        spec = dataclasses.replace(spec, rounding=args.rounding)

    if spec.kind in ex.STAT_KINDS:
        cells = ex.generate_stat_table(spec, _parse_cells(args, spec))
        lines = [f"m={c.m} q={c.q} r={c.r} {c.text}" + (" (unverifiable)" if c.tag != "computed" else "")
                 for c in cells]
        rows = [dict(m=c.m, q=c.q, r=c.r, value=c.text, exact=str(c.exact), tag=c.tag) for c in cells]
    else:
        cells = ex.generate_table(spec)
        width = spec.i1_range
        lines = [f"i2={i2:>2}: " + " ".join(
            f"{c.value:>4}" if c.tag == "computed" else "   ." for c in cells[i2 * width:(i2 + 1) * width])
            for i2 in range(spec.i2_range)]
        rows = [dict(i2=c.row, i1=c.col, value=c.value, tag=c.tag) for c in cells]

    payload: dict = {"table": spec.table_id, "spec": spec.description, "cells": rows}
    status = EXIT_OK
    if args.check:
        if spec.table_id not in ex.published_tables():
            print(f"error: no published values for {spec.table_id}", file=sys.stderr)
            return EXIT_USAGE
        check = ex.check_stats(spec, cells) if spec.kind in ex.STAT_KINDS else ex.check_grid(spec, cells)
        payload["check"] = {"compared": check.compared, "mismatches": check.mismatches}
        lines.append(f"check {spec.table_id}: {check.compared - len(check.mismatches)}/{check.compared} cells match")
        lines.extend(f"  mismatch {m}" for m in check.mismatches)
        if not check.ok:
            status = EXIT_FAIL
        if spec.kind == "mean_improvement":
            readings = ex.mean_improvement_readings([(c.m, c.q, c.r) for c in cells])
            payload["formula_readings"] = readings
            lines.append("formula readings (exact matches): " + ", ".join(f"{k}: {v}" for k, v in readings.items()))
    if args.out:
        extra = {"formula_readings": payload["formula_readings"]} if "formula_readings" in payload else None
        path = ex.write_table(spec, cells, Path(args.out), extra)
        payload["csv"] = str(path)
        lines.append(f"wrote {path}")
    payload["wall_time"] = round(time.perf_counter() - start, 3)
    _emit(payload, args.format, lines)
    return status


# -- verify --------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    if args.mode == "oracle":
        report = verify.oracle_suite(args.trials, args.seed, args.max_m, args.max_s, args.max_r)
    elif args.mode == "witness":
        report = verify.witness_suite(args.max_m, args.max_s, args.max_r)
    elif args.mode == "dominance":
        report = verify.dominance_suite(args.max_q, args.max_r, args.max_m)
    elif args.mode == "closed":
        report = verify.closed_suite(args.max_m, args.max_s, args.max_r)
    else:
        report = verify.equalities_suite(args.max_m, args.max_s, args.max_r)
    lines = [
        f"{report.command}: {report.passed} passed, {report.failed} failed "
        f"in {report.wall_time:.2f}s params={json.dumps(report.params, sort_keys=True)}"
    ]
    for key, value in report.results.items():
        lines.append(f"  {key}: {value}")
    for cx in report.counterexamples:
        lines.append("  counterexample: " + json.dumps(cx, sort_keys=True, default=str))
    _emit(report.as_dict(), args.format, lines)
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multizero", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("text", "json"), default="text")

    b = sub.add_parser("bound", help="evaluate bounds for one query")
    b.add_argument("--exponents", type=_int_list, required=True, help="i1,...,im")
    b.add_argument("--r", type=int, required=True, help="multiplicity target")
    b.add_argument("--sizes", type=_int_list, required=True, help="s1,...,sm")
    b.add_argument("--method", choices=("d", "h", "closed2", "small", "szgen", "all"), default="d")
    b.add_argument("--witness", action="store_true", help="print the H witness with --method all")
    common(b)
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("table", help="regenerate a published table")
    t.add_argument("--table", choices=sorted(ex.TABLES))
    t.add_argument("--stat", choices=ex.STAT_KINDS)
    t.add_argument("--m", type=_int_list)
    t.add_argument("--q", type=_int_list)
    t.add_argument("--r", type=_int_list)
    t.add_argument("--rounding", choices=("truncate", "ceil"))
    t.add_argument("--include-slow", action="store_true", help="also compute the m=4, q>=7 and '?' cells")
    t.add_argument("--check", action="store_true", help="compare with the published values")
    t.add_argument("--out", help="directory for CSV and JSON output")
    common(t)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run a property sweep")
    v.add_argument("--mode", choices=("oracle", "witness", "dominance", "closed", "equalities"), required=True)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-m", type=int, default=2)
    v.add_argument("--max-s", type=int, default=5)
    v.add_argument("--max-r", type=int, default=3)
    v.add_argument("--max-q", type=int, default=16)
    common(v)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
