import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from probderange.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_table_derangements():
    code, out, _ = run("table", "--family", "d_prob", "--dist", "constant:1", "--lambda", "1/3", "--x", "0", "--n", "4")
    assert code == 0
    rows = records(out)
    assert [r["n"] for r in rows] == [0, 1, 2, 3, 4]
    assert rows[2]["value"] == "4/3"


def test_table_r_derangements_vanish():
    code, out, _ = run("table", "--family", "d_prob_r", "--r", "2", "--dist", "gamma:1,1", "--lambda", "1/2", "--n", "1")
    assert code == 0
    assert records(out)[1] == {"family": "d_prob_r", "n": 1, "k": None, "value": "0/1"}


def test_table_euler():
    code, out, _ = run("table", "--family", "euler_prob", "--dist", "constant:1", "--lambda", "1", "--n", "1")
    assert code == 0 and records(out)[1]["value"] == "-1/2"


def test_table_triangle_csv():
    code, out, _ = run("table", "--family", "stirling1", "--n", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert rows[-2] == {"family": "stirling1", "n": "3", "k": "2", "value": "-3/1"}


def test_series_examples():
    code, out, _ = run("series", "--gf", "d_prob", "--dist", "constant:1", "--lambda", "1", "--x", "0", "--order", "4")
    assert code == 0
    assert [r["coefficient"] for r in records(out)] == ["1/1", "0/1", "1/1", "0/1", "1/1"]
    code, out, _ = run("series", "--gf", "fubini_prob", "--dist", "poisson:2", "--lambda", "1/2", "--x", "0", "--order", "3")
    assert [r["coefficient"] for r in records(out)] == ["1/1", "0/1", "0/1", "0/1"]


def test_series_euler():
    code, out, _ = run("series", "--gf", "euler_prob", "--dist", "constant:1", "--lambda", "1", "--order", "2")
    assert code == 0
    assert [F(r["coefficient"]) for r in records(out)] == [1, F(-1, 2), F(1, 4)]


def test_json_round_trip():
    _, out, _ = run("table", "--family", "bell_prob", "--dist", "discrete:-1=1/3,1/2=1/2,2=1/6",
                    "--lambda", "-2/7", "--x", "5/3", "--n", "8")
    for r in records(out):
        q = F(r["value"])
        assert f"{q.numerator}/{q.denominator}" == r["value"]


def test_byte_deterministic():
    argv = ("verify", "--theorem", "2.9", "--nmax", "6", "--samples", "2", "--seed", "5")
    assert run(*argv) == run(*argv)


def test_verify_reports_and_summary():
    code, out, err = run("verify", "--theorem", "2.2", "--nmax", "4", "--samples", "2", "--seed", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2 * 2 * 5
    assert {row["pass"] for row in rows} == {"true"}
    assert "summary: 1 theorem(s), 0 failure(s)" in err


def test_verify_explicit_point():
    code, out, _ = run("verify", "--theorem", "2.5", "--dist", "constant:1", "--lambda", "1/3", "--x", "2/7", "--nmax", "10")
    assert code == 0
    rows = records(out)
    assert len(rows) == 11 and all(r["residual"] == "0/1" for r in rows)


def test_verify_exhaustive():
    code, out, _ = run("verify", "--theorem", "2.10", "--exhaustive", "--nmax", "2", "--dist", "bernoulli:1/2")
    assert code == 0
    assert len(records(out)) == 9 * 2 * 3


def test_verify_precondition_error():
    code, _, err = run("verify", "--theorem", "2.13", "--dist", "bernoulli:1/2")
    assert code == 2
    assert "Gamma(1,1)" in err or "gamma" in err.lower()


def test_verify_variant_note():
    code, _, err = run("verify", "--theorem", "2.11", "--nmax", "5", "--samples", "1")
    assert code == 0
    assert "corrected variant '(-1)^l' holds" in err


@pytest.mark.parametrize(
    "argv",
    [
        ("table", "--family", "nope"),
        ("table", "--family", "d_prob", "--lambda", "1"),
        ("table", "--family", "d_prob_r", "--dist", "constant:1", "--lambda", "1"),
        ("table", "--family", "d_prob", "--dist", "cauchy:1", "--lambda", "1", "--x", "0"),
        ("table", "--family", "d", "--x", "0.5"),
        ("table", "--family", "d", "--x", "1", "--n", "-1"),
        ("series", "--gf", "d_deg", "--lambda", "0", "--x", "1"),
        ("series", "--gf", "nope"),
        ("verify", "--theorem", "9.9"),
        ("verify", "--samples", "0"),
        ("bogus",),
    ],
)
def test_usage_errors(argv):
    code, out, _ = run(*argv)
    assert code == 2
    assert out == ""


def test_module_entry_point_and_env(tmp_path):
    env = {"PROBDERANGE_ABEL_DPS": "40", "PATH": "/usr/bin:/bin"}
    proc = subprocess.run(
        [sys.executable, "-m", "probderange", "verify", "--theorem", "2.6", "--nmax", "2",
         "--dist", "constant:1", "--lambda", "1/2", "--x", "0"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    abel = [r for r in records(proc.stdout) if r["mode"] == "abel"]
    assert len(abel) == 3 and all(r["pass"] for r in abel)
    assert all(r["tolerance"].startswith("1.0000") for r in abel)


def test_bad_precision_env():
    env = {"PROBDERANGE_ABEL_DPS": "many", "PATH": "/usr/bin:/bin"}
    proc = subprocess.run(
        [sys.executable, "-m", "probderange", "verify", "--theorem", "2.6", "--nmax", "1",
         "--dist", "constant:1", "--lambda", "1/2", "--x", "0"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert proc.returncode == 2
    assert "PROBDERANGE_ABEL_DPS" in proc.stderr
