"""Command-line entry point: classno, gen, verify, sweep.

Exit status: 0 when every row is OK or skipped, 1 on any mismatch or
rejected row, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .arith import FactorizationError
from .classgroup import IMAG_CUTOFF, REAL_CUTOFF, DiscriminantTooLarge, class_number
from .families import GENERATORS, CertificateError, ExcludedField, FamilyId, ParameterError, generate
from .harness import (
    OK,
    SKIPPED_SIZE,
    FixtureError,
    instance_h,
    parse_range,
    sweep,
    verify_table,
)
from .quadfield import NotAQuadraticField

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def _add_cutoffs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cutoff", type=int, default=REAL_CUTOFF, help="largest real discriminant to enumerate")
    p.add_argument("--imag-cutoff", type=int, default=IMAG_CUTOFF, help="largest |discriminant| for imaginary fields")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadclass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classno", help="class number of Q(sqrt(n))")
    p.add_argument("n", type=int)
    p.add_argument("--json", action="store_true")
    _add_cutoffs(p)

    p = sub.add_parser("gen", help="build one family instance and show its certificate")
    p.add_argument("family", help="thm2_1 .. thm2_5, thm3_1I, thm3_1II, thm3_2")
    for name in ("m", "n", "k", "p", "r", "a", "b"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--json", action="store_true")
    _add_cutoffs(p)

    p = sub.add_parser("verify", help="recompute a table from the fixtures")
    p.add_argument("--table", required=True, help="table number 1..7 or 'all'")
    p.add_argument("--fixtures", help="directory holding table<N>.csv (default: bundled)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    _add_cutoffs(p)

    p = sub.add_parser("sweep", help="check 3 | h over a parameter grid")
    p.add_argument("family")
    p.add_argument("--range", action="append", default=[], dest="ranges", metavar="NAME=LO..HI")
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    _add_cutoffs(p)
    return parser


def cmd_classno(args) -> int:
    try:
        res = class_number(args.n, args.cutoff, args.imag_cutoff)
    except DiscriminantTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAQuadraticField as exc:
        msg = "perfect square" if "square" in str(exc) else str(exc)
        print(f"error: {args.n}: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"n": args.n, "d": res.d, "delta": res.delta, "h": res.h, "h_narrow": res.h_narrow,
                          "unit_norm": res.unit_norm, "method": res.method}))
        return EXIT_OK
    print(f"n = {args.n}")
    print(f"d = {res.d}")
    print(f"delta = {res.delta}")
    print(f"h = {res.h}")
    if res.is_real:
        print(f"h+ = {res.h_narrow}")
        print(f"unit norm = {res.unit_norm:+d}")
    print(f"method = {res.method}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        family = FamilyId.parse(args.family)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _, names = GENERATORS[family]
    params = {n: getattr(args, n) for n in names if getattr(args, n) is not None}
    try:
        inst = generate(family, **params)
    except (ParameterError, ExcludedField, CertificateError, FactorizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    h = instance_h(inst, args.cutoff, args.imag_cutoff)
    if args.json:
        print(json.dumps({"family": family.value, "params": inst.params, "raw_d": inst.raw_d, "d": inst.d, "h": h,
                          "divisible": None if h is None else h % 3 == 0,
                          "certificate": inst.certificate.summary()}))
        return EXIT_OK
    print(f"family = {family.value}")
    print(f"params = {inst.params}")
    print(f"raw d = {inst.raw_d}")
    print(f"d = {inst.d}")
    print(f"certificate: {inst.certificate.summary()}")
    print(f"h = {h if h is not None else 'skipped (beyond cutoff)'}")
    return EXIT_OK


def _format_record(rec) -> str:
    params = " ".join(f"{k}={v}" for k, v in rec.row.params.items())
    cols = []
    for c in rec.checks:
        cols.append(f"d={c.raw_d} (paper {c.paper_d}) h={c.h} (paper {c.paper_h})")
    line = f"table {rec.row.table_id}  {params:<18} {' | '.join(cols)}  {rec.status}"
    notes = [c.note for c in rec.checks if c.note and c.status != OK]
    return line + (f"  [{'; '.join(notes)}]" if notes else "")


def cmd_verify(args) -> int:
    if args.table == "all":
        tables = list(range(1, 8))
    else:
        try:
            tables = [int(args.table)]
        except ValueError:
            print(f"error: bad table {args.table!r}", file=sys.stderr)
            return EXIT_USAGE
        if tables[0] not in range(1, 8):
            print(f"error: table must be 1..7, got {tables[0]}", file=sys.stderr)
            return EXIT_USAGE
    worst = EXIT_OK
    for t in tables:
        try:
            records = verify_table(t, args.cutoff, args.imag_cutoff, args.jobs, args.fixtures)
        except (FixtureError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for rec in records:
            print(json.dumps(rec.to_json()) if args.json else _format_record(rec))
            if rec.status not in (OK, SKIPPED_SIZE):
                worst = EXIT_MISMATCH
        if not args.json:
            counts: dict[str, int] = {}
            for rec in records:
                counts[rec.status] = counts.get(rec.status, 0) + 1
            print(f"table {t}: {len(records)} rows, " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return worst


def cmd_sweep(args) -> int:
    try:
        family = FamilyId.parse(args.family)
        ranges = dict(parse_range(r) for r in args.ranges)
        summary = sweep(family, ranges, args.cutoff, args.imag_cutoff, args.jobs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({
            "family": family.value,
            **summary.counts(),
            "instances": [{"params": p, "d": d, "h": h} for p, d, h in summary.verified],
            "counterexample_list": [{"params": p, "d": d, "h": h} for p, d, h in summary.counterexamples],
        }))
    else:
        for p, d, h in summary.verified:
            print(f"{p}  d={d}  h={h}  3|h")
        for p, d in summary.skipped:
            print(f"{p}  d={d}  skipped (beyond cutoff)")
        for p, d, h in summary.counterexamples:
            print(f"{p}  d={d}  h={h}  COUNTEREXAMPLE")
        print(", ".join(f"{k}={v}" for k, v in summary.counts().items()))
    return EXIT_MISMATCH if summary.counterexamples else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    handler = {"classno": cmd_classno, "gen": cmd_gen, "verify": cmd_verify, "sweep": cmd_sweep}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
