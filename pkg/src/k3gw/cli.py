"""Command line entry point: ``k3gw {table,verify,series,reduce,bench}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from . import counts
from .cohomology import FAMILY_NAMES
from .qseries import CATALOG, eta24_inverse
from .series import mul, mul_fast
from .trr import eval_pf_trr, eval_trr_rhs, pf_trr3_value
from .verify import CHECKS, run_all

SERIES_NAMES = {
    "g2": lambda n: CATALOG.get("g2", n),
    "f": lambda n: CATALOG.get("F", n),
    "eta24_inverse": lambda n: CATALOG.get("eta24_inverse", n),
}
SERIES_NAMES.update({fid.lower(): (lambda fid: lambda n: counts.family_series(fid, n).series)(fid)
                     for fid in counts.FAMILY_IDS})

REDUCE_TARGETS = ("trr", "pf-trr", "pf-trr2", "pf-trr3")


def fmt(x: Fraction) -> str:
    return str(x)


def _emit_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=int, default=128, help="truncation order (default 128)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    p = argparse.ArgumentParser(prog="k3gw", description="Exact generating functions for elliptic curves in K3 surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="N1(d,1) versus N1(d,2) at d = 4e - 3")
    t.add_argument("--max-e", type=int, default=32)

    v = sub.add_parser("verify", parents=[common], help="run the identity checks")
    v.add_argument("--check", default=None, help="comma-separated check ids, e.g. C3,C7")

    s = sub.add_parser("series", parents=[common], help="print the coefficients of a named series")
    s.add_argument("--name", required=True, type=str.lower, choices=sorted(SERIES_NAMES))

    r = sub.add_parser("reduce", parents=[common], help="reduce the genus-two recursion")
    r.add_argument("--target", choices=REDUCE_TARGETS, default="trr")
    r.add_argument("--family", choices=FAMILY_NAMES, default="2s,f")

    b = sub.add_parser("bench", parents=[common], help="time the eta^-24 self-product")
    b.add_argument("--algo", choices=("naive", "fast"), default="fast")
    return p


def _cmd_table(args, out, err) -> int:
    rows = counts.table(args.max_e, counts.m1_theorem(args.order), counts.n1(args.order))
    if args.format == "csv":
        out.write(_emit_csv(["d", "e", "N1_index1", "N1_index2", "agree"],
                            [[r.d, r.e, fmt(r.n1_index1), fmt(r.n1_index2), str(r.agree).lower()]
                             for r in rows]))
    else:
        out.write(_emit_json({"order": args.order, "rows": [
            {"d": r.d, "e": r.e, "N1_index1": fmt(r.n1_index1), "N1_index2": fmt(r.n1_index2),
             "agree": r.agree} for r in rows]}))
    bad = [r for r in rows if not r.agree]
    for r in bad:
        err.write(f"disagreement at d={r.d}: {r.n1_index1} != {r.n1_index2}\n")
    return 1 if bad else 0


def _cmd_verify(args, out, err) -> int:
    ids = None
    if args.check:
        ids = [c.strip().upper() for c in args.check.split(",") if c.strip()]
        unknown = [c for c in ids if c not in CHECKS]
        if unknown:
            raise _UsageError(f"unknown check id(s): {', '.join(unknown)}")
    reports = run_all(args.order, ids=ids)
    if args.format == "csv":
        out.write(_emit_csv(["id", "status", "order_certified", "first_failing_exponent", "description"],
                            [[r.id, r.status, r.order_certified,
                              "" if r.first_failing_exponent is None else r.first_failing_exponent,
                              r.description] for r in reports]))
    else:
        out.write(_emit_json({"order": args.order, "checks": [r.as_dict() for r in reports]}))
    for r in reports:
        err.write(f"{r.id:>4} {r.status.upper()}  {r.description}\n")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_series(args, out, err) -> int:
    s = SERIES_NAMES[args.name](args.order)
    if args.format == "csv":
        out.write(_emit_csv(["n", "coefficient"], [[n, fmt(c)] for n, c in enumerate(s)]))
    else:
        out.write(_emit_json({"name": args.name, "order": s.order, "coefficients": [fmt(c) for c in s]}))
    return 0


def _cmd_reduce(args, out, err) -> int:
    if args.target == "trr":
        value = eval_trr_rhs(args.family).total
    elif args.target == "pf-trr":
        value = eval_pf_trr(args.family).total
    elif args.target == "pf-trr2":
        ev = eval_pf_trr(args.family)
        value = ev.by_term["R1"] + ev.by_term["R2"]
    else:
        value = pf_trr3_value(args.family)
    doc = value.as_dict()
    if args.format == "csv":
        out.write(_emit_csv(["atom", "coefficient"], [["gw1pt", doc["gw1pt"]], ["gw0", doc["gw0"]]]
                            + [["irreducible", t] for t in doc["irreducible"]]))
    else:
        out.write(_emit_json(doc))
    return 0 if value.fully_reduced else 1


def _cmd_bench(args, out, err) -> int:
    n = args.order
    f = eta24_inverse(n)
    start = time.perf_counter()
    sq = mul_fast(f, f) if args.algo == "fast" else mul(f, f)
    elapsed = time.perf_counter() - start
    spots = sorted({0, min(1000, n), n})
    c = f.coeffs
    oracle = {k: sum(c[i] * c[k - i] for i in range(k + 1)) for k in spots}
    match = all(sq[k] == oracle[k] for k in spots)
    doc = {"order": n, "algo": args.algo, "match": match, "spot": {str(k): fmt(sq[k]) for k in spots}}
    if args.format == "csv":
        out.write(_emit_csv(["n", "coefficient", "match"],
                            [[k, fmt(sq[k]), str(sq[k] == oracle[k]).lower()] for k in spots]))
    else:
        out.write(_emit_json(doc))
    err.write(f"{args.algo} product at order {n}: {elapsed:.3f} s\n")
    return 0 if match else 1


class _UsageError(Exception):
    pass


_COMMANDS = {
    "table": _cmd_table,
    "verify": _cmd_verify,
    "series": _cmd_series,
    "reduce": _cmd_reduce,
    "bench": _cmd_bench,
}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.order < 0:
        parser.print_usage(err)
        err.write("k3gw: error: --order must be non-negative\n")
        return 2
    if args.command == "verify" and args.order < 8:
        parser.print_usage(err)
        err.write("k3gw: error: verify needs --order >= 8\n")
        return 2
    if args.command == "table" and (args.max_e < 0 or 4 * args.max_e - 3 > args.order):
        parser.print_usage(err)
        err.write(f"k3gw: error: table needs 0 <= 4*max_e - 3 <= order (max_e={args.max_e}, order={args.order})\n")
        return 2
    try:
        return _COMMANDS[args.command](args, out, err)
    except (_UsageError, ValueError) as exc:
        parser.print_usage(err)
        err.write(f"k3gw: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
