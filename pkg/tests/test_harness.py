import json
import subprocess
import sys

import pytest

from quadclass.cli import main
from quadclass.harness import (
    D_MISMATCH,
    OK,
    PARAM_REJECT,
    SKIPPED_SIZE,
    FamilyId,
    FixtureError,
    TableRow,
    fixture_path,
    load_fixture,
    parse_range,
    sweep,
    verify_row,
    verify_rows,
    verify_table,
)

ROW_COUNTS = {1: 32, 2: 20, 3: 11, 4: 11, 5: 12, 6: 18, 7: 38}


# --- fixtures -----------------------------------------------------------------


@pytest.mark.parametrize("table_id, count", ROW_COUNTS.items())
def test_fixture_row_counts(table_id, count):
    assert len(load_fixture(fixture_path(table_id))) == count


def test_fixture_first_rows():
    r = load_fixture(fixture_path(1))[0]
    assert (r.params, r.paper_d, r.paper_h) == ({"m": 3, "n": 1, "k": 1}, 321, 3)
    r = load_fixture(fixture_path(2))[0]
    assert r.params == {"m": 3, "n": 3}
    assert r.pairs == [(-31, 3), (-23, 3)]


def test_malformed_row_reports_line(tmp_path):
    p = tmp_path / "table7.csv"
    p.write_text("m,d,h\n3,-53,6\n5,oops,12\n")
    with pytest.raises(FixtureError, match=r"table7.csv:3:"):
        load_fixture(p)
    p.write_text("m,d,h\n3,-53\n")
    with pytest.raises(FixtureError, match=r":2:"):
        load_fixture(p)
    p.write_text("m,d\n3,-53\n")
    with pytest.raises(FixtureError, match=r":1:"):
        load_fixture(p)


# --- verification -------------------------------------------------------------


def test_verify_examples():
    t7 = verify_table(7)
    assert (t7[0].status, t7[0].computed_raw_d, t7[0].computed_h) == (OK, -53, 6)
    t1 = {tuple(r.row.params.values()): r for r in verify_table(1)}
    rec = t1[(3, 3, 1)]
    assert rec.status == D_MISMATCH and rec.computed_raw_d == 236193
    assert rec.row.paper_d == 2361953
    # the recomputed field still gets its class number for auditing
    assert rec.computed_h is not None
    assert rec.checks[0].note


def test_status_semantics():
    ok = TableRow(7, {"m": 3}, -53, 6)
    assert verify_row(ok).status == OK
    assert verify_row(TableRow(7, {"m": 3}, -53, 7)).status == "H_MISMATCH"
    assert verify_row(TableRow(7, {"m": 3}, -54, 6)).status == D_MISMATCH
    assert verify_row(TableRow(7, {"m": 4}, -127, 6)).status == PARAM_REJECT
    assert verify_row(TableRow(7, {"m": 3}, -53, 6), imag_cutoff=100).status == SKIPPED_SIZE


def test_two_pair_rows():
    rows = load_fixture(fixture_path(3))
    rec = verify_row(rows[0])
    assert [c.raw_d for c in rec.checks] == [-241, -247]
    assert rec.status == OK
    assert "pairs" in rec.to_json()


def test_statuses_partition_rows_and_are_deterministic():
    rows = load_fixture(fixture_path(2)) + load_fixture(fixture_path(7))
    serial = verify_rows(rows)
    parallel = verify_rows(rows, jobs=2)
    assert [r.to_json() for r in serial] == [r.to_json() for r in parallel]
    assert len(serial) == len(rows)
    assert [r.to_json() for r in verify_rows(rows)] == [r.to_json() for r in serial]


def test_table4_with_lowered_cutoff():
    records = verify_table(4, real_cutoff=10**6, imag_cutoff=10**6)
    assert len(records) == 11
    assert all(r.status == SKIPPED_SIZE for r in records)
    big = records[-1]
    assert big.row.params == {"a": 49, "b": 306, "n": 3} and big.computed_raw_d == 2422323582800979


@pytest.mark.slow
def test_table4_default_cutoff():
    records = verify_table(4)
    statuses = [r.status for r in records]
    assert statuses.count(OK) == 4 and statuses.count(SKIPPED_SIZE) == 7
    assert records[-1].status == SKIPPED_SIZE


# --- sweeps -------------------------------------------------------------------


def test_parse_range():
    assert parse_range("m=3..7") == ("m", [3, 4, 5, 6, 7])
    assert parse_range("sign=+,-") == ("sign", ["+", "-"])
    assert parse_range("n=3") == ("n", [3])
    with pytest.raises(ValueError):
        parse_range("m3..7")


def test_sweep_examples():
    s = sweep(FamilyId.Thm3_2, {"m": list(range(3, 22))})
    assert s.counts() == {"verified": 10, "skipped": 0, "rejected": 9, "counterexamples": 0}
    s = sweep(FamilyId.Thm3_1I, {"m": [3, 9, 15, 21]})
    assert sorted(h for _, _, h in s.verified) == [12, 72, 96, 240]
    s = sweep(FamilyId.Thm2_1, {"m": [], "n": [1], "k": [1]})
    assert s.instances == 0 and s.counts()["rejected"] == 0


def test_sweep_independent_of_jobs():
    ranges = {"m": list(range(3, 40, 2))}
    assert sweep(FamilyId.Thm3_2, ranges).verified == sweep(FamilyId.Thm3_2, ranges, jobs=2).verified


def test_sweep_other_families():
    s = sweep(FamilyId.Thm2_2, {"m": [3, 9], "n": [3, 15, 21]})
    assert s.counts()["counterexamples"] == 0 and len(s.verified) == 12
    s = sweep(FamilyId.Thm2_3, {"m": [3, 5], "n": [1], "p": [1, 3, 5]})
    assert s.counts()["counterexamples"] == 0 and s.instances == 11
    # 3^3 - 2 = 25: the field is Q(i), h = 1, and the certificate refuses it
    (params, reason), = s.rejected
    assert params == {"m": 3, "n": 1, "p": 1, "r": -2} and "rational root" in reason
    with pytest.raises(ValueError):
        sweep(FamilyId.Thm3_2, {"q": [1]})


# --- CLI ----------------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_classno(capsys):
    code, out, _ = run(capsys, "classno", "-53")
    assert code == 0 and "h = 6" in out
    code, out, _ = run(capsys, "classno", "321")
    assert code == 0 and "h = 3" in out and "unit norm = +1" in out
    code, _, err = run(capsys, "classno", "16")
    assert code == 2 and "perfect square" in err
    code, out, _ = run(capsys, "classno", "--json", "8745")
    assert code == 0 and json.loads(out)["h"] == 12


def test_cli_classno_cutoff(capsys):
    code, _, err = run(capsys, "classno", "--cutoff", "100", "321")
    assert code == 2 and "cutoff" in err


def test_cli_gen(capsys):
    code, out, _ = run(capsys, "gen", "thm3_2", "--m", "3")
    assert code == 0 and "raw d = -53" in out and "h = 6" in out
    code, out, _ = run(capsys, "gen", "thm2_2", "--m", "3", "--n", "3", "--sign", "-", "--json")
    data = json.loads(out)
    assert code == 0 and data["raw_d"] == -23 and data["divisible"] is True
    code, _, err = run(capsys, "gen", "thm3_2", "--m", "2")
    assert code == 2 and "odd" in err
    code, _, _ = run(capsys, "gen", "thm9", "--m", "3")
    assert code == 2


def test_cli_verify(capsys):
    code, out, _ = run(capsys, "verify", "--table", "7")
    assert code == 0 and "table 7: 38 rows, OK=38" in out
    code, out, _ = run(capsys, "verify", "--table", "5", "--json")
    assert code == 1
    lines = [json.loads(x) for x in out.splitlines()]
    assert len(lines) == 12
    assert set(lines[0]) >= {"table", "params", "raw_d", "d", "h", "status"}
    assert sum(x["status"] == D_MISMATCH for x in lines) == 4


def test_cli_verify_usage_errors(capsys, tmp_path):
    assert run(capsys, "verify", "--table", "9")[0] == 2
    assert run(capsys, "verify", "--table", "x")[0] == 2
    assert run(capsys, "verify", "--table", "7", "--fixtures", str(tmp_path))[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_cli_verify_jobs_do_not_change_output(capsys):
    _, one, _ = run(capsys, "verify", "--table", "2", "--json")
    _, two, _ = run(capsys, "verify", "--table", "2", "--json", "--jobs", "2")
    assert one == two


def test_cli_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "thm3_2", "--range", "m=3..21")
    assert code == 0 and "verified=10" in out
    code, out, _ = run(capsys, "sweep", "thm3_1I", "--range", "m=3..21", "--json")
    data = json.loads(out)
    assert code == 0 and sorted(i["h"] for i in data["instances"]) == [12, 72, 96, 240]
    assert run(capsys, "sweep", "thm3_2", "--range", "m=3")[0] == 0
    assert run(capsys, "sweep", "thm3_2", "--range", "bogus")[0] == 2


def test_module_entry_point():
    cmd = [sys.executable, "-m", "quadclass", "classno", "-31"]
    proc = subprocess.run(cmd, capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "h = 3" in proc.stdout
