"""Table fixtures, row-by-row verification and parameter sweeps."""

from __future__ import annotations

import csv
import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Union

from .arith import FactorizationError
from .classgroup import IMAG_CUTOFF, REAL_CUTOFF, class_number
from .families import (
    GENERATORS,
    CertificateError,
    ExcludedField,
    FamilyId,
    FamilyInstance,
    ParameterError,
    generate,
    verify_divisibility,
)

OK = "OK"
D_MISMATCH = "D_MISMATCH"
H_MISMATCH = "H_MISMATCH"
BOTH_MISMATCH = "BOTH_MISMATCH"
SKIPPED_SIZE = "SKIPPED_SIZE"
PARAM_REJECT = "PARAM_REJECT"

# table id -> family, and the extra parameter that distinguishes the (d, h) column pairs
TABLE_FAMILIES: dict[int, tuple[FamilyId, tuple[dict, ...]]] = {
    1: (FamilyId.Thm2_1, ({},)),
    2: (FamilyId.Thm2_2, ({"sign": "+"}, {"sign": "-"})),
    3: (FamilyId.Thm2_3, ({"r": -2}, {"r": 4})),
    4: (FamilyId.Thm2_4, ({},)),
    5: (FamilyId.Thm2_5, ({},)),
    6: (FamilyId.Thm3_1I, ({},)),
    7: (FamilyId.Thm3_2, ({},)),
}

_GENERATION_ERRORS = (ParameterError, ExcludedField, CertificateError, FactorizationError)


class FixtureError(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    table_id: int
    params: dict[str, int] = field(hash=False)
    paper_d: int
    paper_h: int
    second: Optional[tuple[int, int]] = None
    line: int = 0

    @property
    def pairs(self) -> list[tuple[int, int]]:
        out = [(self.paper_d, self.paper_h)]
        if self.second is not None:
            out.append(self.second)
        return out


@dataclass
class PairCheck:
    paper_d: int
    paper_h: int
    status: str
    raw_d: Optional[int] = None
    d: Optional[int] = None
    h: Optional[int] = None
    printed_h: Optional[int] = None
    certificate: str = ""
    note: str = ""


@dataclass
class VerificationRecord:
    row: TableRow
    checks: list[PairCheck]
    status: str

    @property
    def computed_raw_d(self) -> Optional[int]:
        return self.checks[0].raw_d

    @property
    def computed_d(self) -> Optional[int]:
        return self.checks[0].d

    @property
    def computed_h(self) -> Optional[int]:
        return self.checks[0].h

    @property
    def flags_d(self) -> bool:
        return self.status in (D_MISMATCH, BOTH_MISMATCH)

    def to_json(self) -> dict:
        first = self.checks[0]
        out = {
            "table": self.row.table_id,
            "params": dict(self.row.params),
            "raw_d": first.raw_d,
            "d": first.d,
            "h": first.h,
            "status": self.status,
            "paper_d": first.paper_d,
            "paper_h": first.paper_h,
        }
        if len(self.checks) > 1:
            out["pairs"] = [
                {"paper_d": c.paper_d, "paper_h": c.paper_h, "raw_d": c.raw_d, "d": c.d, "h": c.h, "status": c.status}
                for c in self.checks
            ]
        return out


# --- fixtures -----------------------------------------------------------------


def fixture_dir() -> Path:
    return Path(str(resources.files("quadclass") / "fixtures"))


def fixture_path(table_id: int, directory: Union[str, Path, None] = None) -> Path:
    return Path(directory or fixture_dir()) / f"table{table_id}.csv"


def _int(value: str, path, lineno: int, column: str) -> int:
    try:
        return int(value.strip())
    except (ValueError, AttributeError):
        raise FixtureError(f"{path}:{lineno}: column {column!r} is not an integer: {value!r}") from None


def load_fixture(path: Union[str, Path], table_id: Optional[int] = None) -> list[TableRow]:
    path = Path(path)
    if table_id is None:
        m = re.search(r"table(\d+)", path.stem)
        if not m:
            raise FixtureError(f"{path}: cannot infer the table number from the file name")
        table_id = int(m.group(1))
    if table_id not in TABLE_FAMILIES:
        raise FixtureError(f"{path}: unknown table {table_id}")
    family, variants = TABLE_FAMILIES[table_id]
    _, names = GENERATORS[family]
    param_names = [n for n in names if n not in variants[0]]
    pair_cols = [("d", "h")] if len(variants) == 1 else [("d1", "h1"), ("d2", "h2")]
    expected = param_names + [c for pair in pair_cols for c in pair]

    rows = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise FixtureError(f"{path}:1: empty fixture") from None
        if sorted(header) != sorted(expected):
            raise FixtureError(f"{path}:1: header {header} does not match expected columns {expected}")
        for values in reader:
            lineno = reader.line_num
            if not values or all(not v.strip() for v in values):
                continue
            if len(values) != len(header):
                raise FixtureError(f"{path}:{lineno}: expected {len(header)} fields, got {len(values)}")
            rec = {col: _int(v, path, lineno, col) for col, v in zip(header, values)}
            pairs = [(rec[dc], rec[hc]) for dc, hc in pair_cols]
            for _, h in pairs:
                if h <= 0:
                    raise FixtureError(f"{path}:{lineno}: class number must be positive")
            rows.append(
                TableRow(
                    table_id=table_id,
                    params={n: rec[n] for n in param_names},
                    paper_d=pairs[0][0],
                    paper_h=pairs[0][1],
                    second=pairs[1] if len(pairs) > 1 else None,
                    line=lineno,
                )
            )
    return rows


# --- verification -------------------------------------------------------------


def _class_number_or_none(n: int, real_cutoff: int, imag_cutoff: int) -> Optional[int]:
    try:
        return class_number(n, real_cutoff, imag_cutoff).h
    except (ValueError, FactorizationError):
        return None


def _check_pair(
    family: FamilyId, params: dict, paper_d: int, paper_h: int, real_cutoff: int, imag_cutoff: int
) -> PairCheck:
    try:
        inst = generate(family, **params)
    except _GENERATION_ERRORS as exc:
        return PairCheck(paper_d, paper_h, PARAM_REJECT, note=str(exc))
    check = PairCheck(paper_d, paper_h, OK, raw_d=inst.raw_d, d=inst.d, certificate=inst.certificate.summary())
    res = verify_divisibility(inst, real_cutoff, imag_cutoff)
    if res is not None:
        check.h = res[0]
    if inst.raw_d != paper_d:
        check.status = D_MISMATCH
        check.printed_h = _class_number_or_none(paper_d, real_cutoff, imag_cutoff)
        agrees = [label for label, h in (("recomputed d", check.h), ("printed d", check.printed_h)) if h == paper_h]
        check.note = f"printed h matches h({', '.join(agrees)})" if agrees else "printed h matches neither field"
    elif check.h is None:
        check.status = SKIPPED_SIZE
    elif check.h != paper_h:
        check.status = H_MISMATCH
    return check


def _combine(statuses: list[str]) -> str:
    if all(s == OK for s in statuses):
        return OK
    if PARAM_REJECT in statuses:
        return PARAM_REJECT
    d_bad, h_bad = D_MISMATCH in statuses, H_MISMATCH in statuses
    if d_bad and h_bad:
        return BOTH_MISMATCH
    if d_bad:
        return D_MISMATCH
    if h_bad:
        return H_MISMATCH
    return SKIPPED_SIZE


def verify_row(row: TableRow, real_cutoff: int = REAL_CUTOFF, imag_cutoff: int = IMAG_CUTOFF) -> VerificationRecord:
    family, variants = TABLE_FAMILIES[row.table_id]
    checks = [
        _check_pair(family, {**row.params, **extra}, d, h, real_cutoff, imag_cutoff)
        for extra, (d, h) in zip(variants, row.pairs)
    ]
    return VerificationRecord(row, checks, _combine([c.status for c in checks]))


def verify_rows(
    rows: Iterable[TableRow], real_cutoff: int = REAL_CUTOFF, imag_cutoff: int = IMAG_CUTOFF, jobs: int = 1
) -> list[VerificationRecord]:
    work = partial(verify_row, real_cutoff=real_cutoff, imag_cutoff=imag_cutoff)
    rows = list(rows)
    if jobs <= 1 or len(rows) <= 1:
        return [work(r) for r in rows]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(work, rows))


def verify_table(
    table_id: int,
    real_cutoff: int = REAL_CUTOFF,
    imag_cutoff: int = IMAG_CUTOFF,
    jobs: int = 1,
    directory: Union[str, Path, None] = None,
) -> list[VerificationRecord]:
    rows = load_fixture(fixture_path(table_id, directory), table_id)
    return verify_rows(rows, real_cutoff, imag_cutoff, jobs)


# --- sweeps -------------------------------------------------------------------

SWEEP_DEFAULTS: dict[str, list] = {"sign": ["+", "-"], "r": [-2, 4], "k": [1]}


@dataclass
class SweepSummary:
    family: FamilyId
    verified: list[tuple[dict, int, int]] = field(default_factory=list)
    skipped: list[tuple[dict, int]] = field(default_factory=list)
    rejected: list[tuple[dict, str]] = field(default_factory=list)
    counterexamples: list[tuple[dict, int, int]] = field(default_factory=list)

    @property
    def instances(self) -> int:
        return len(self.verified) + len(self.skipped) + len(self.counterexamples)

    def counts(self) -> dict[str, int]:
        return {
            "verified": len(self.verified),
            "skipped": len(self.skipped),
            "rejected": len(self.rejected),
            "counterexamples": len(self.counterexamples),
        }


def parse_range(spec: str) -> tuple[str, list]:
    """'m=3..21' (inclusive), 'sign=+,-' or 'n=3'."""
    if "=" not in spec:
        raise ValueError(f"range {spec!r} must look like name=lo..hi")
    name, _, body = spec.partition("=")
    name, body = name.strip(), body.strip()
    if ".." in body:
        lo, _, hi = body.partition("..")
        return name, list(range(int(lo), int(hi) + 1))
    values: list = []
    for item in body.split(","):
        item = item.strip()
        values.append(item if item in ("+", "-") else int(item))
    return name, values


def _sweep_one(family: FamilyId, params: dict, real_cutoff: int, imag_cutoff: int):
    try:
        inst = generate(family, **params)
    except _GENERATION_ERRORS as exc:
        return "rejected", params, str(exc)
    res = verify_divisibility(inst, real_cutoff, imag_cutoff)
    if res is None:
        return "skipped", params, inst.d
    h, divisible = res
    return ("verified" if divisible else "counterexample"), params, (inst.d, h)


def sweep(
    family: FamilyId,
    ranges: dict[str, list],
    real_cutoff: int = REAL_CUTOFF,
    imag_cutoff: int = IMAG_CUTOFF,
    jobs: int = 1,
) -> SweepSummary:
    _, names = GENERATORS[family]
    unknown = set(ranges) - set(names)
    if unknown:
        raise ValueError(f"{family.value} has no parameters {sorted(unknown)}")
    axes = []
    for n in names:
        if n in ranges:
            axes.append(list(ranges[n]))
        elif n in SWEEP_DEFAULTS:
            axes.append(SWEEP_DEFAULTS[n])
        else:
            raise ValueError(f"missing range for parameter {n!r}")
    combos = [dict(zip(names, values)) for values in itertools.product(*axes)]
    work = partial(_sweep_one, family, real_cutoff=real_cutoff, imag_cutoff=imag_cutoff)
    if jobs > 1 and len(combos) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, combos))
    else:
        results = [work(c) for c in combos]

    summary = SweepSummary(family)
    for kind, params, payload in results:
        if kind == "rejected":
            summary.rejected.append((params, payload))
        elif kind == "skipped":
            summary.skipped.append((params, payload))
        elif kind == "verified":
            summary.verified.append((params, *payload))
        else:
            summary.counterexamples.append((params, *payload))
    return summary


def instance_h(inst: FamilyInstance, real_cutoff: int = REAL_CUTOFF, imag_cutoff: int = IMAG_CUTOFF) -> Optional[int]:
    res = verify_divisibility(inst, real_cutoff, imag_cutoff)
    return None if res is None else res[0]
