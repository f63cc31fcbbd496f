import csv
import io
import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from qmin.cli import cli, main
from qmin.expectation import expected_value_mobius, expected_value_pmf
from qmin.montecarlo import EmpiricalHistogram, sample_qmin
from qmin.pmf import PmfTable, pmf
from qmin.rational import from_text

F = Fraction


def run(*args, **kw):
    res = CliRunner().invoke(cli, list(args), catch_exceptions=False, **kw)
    return res


def test_qmin_example():
    res = run("qmin", "--x", "0.37", "--delta", "1/10")
    obj = json.loads(res.output)
    assert obj["fraction"] == "1/3" and obj["q_min"] == 3
    assert obj["schema_version"] == 1


def test_qmin_lo_hi_and_full_delta():
    assert json.loads(run("qmin", "--lo", "1/4", "--hi", "3/4").output)["fraction"] == "1/2"
    obj = json.loads(run("qmin", "--x", "0.37", "--delta", "1/20", "--radius-convention", "full-delta").output)
    assert obj["fraction"] == "1/3"


def test_pmf_csv_example():
    res = run("pmf", "--delta", "1/2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert [(r["q"], f"{r['mass_num']}/{r['mass_den']}") for r in rows] == [("1", "1/2"), ("2", "1/2"), ("3", "0/1")]


def test_pmf_round_trips():
    delta = F(7, 1000)
    table = pmf(delta)
    assert PmfTable.from_csv(run("pmf", "--delta", "7/1000").output, delta) == table
    assert PmfTable.from_json(run("pmf", "--delta", "0.007", "--format", "json").output) == table


def test_decimal_delta_is_exact():
    obj = json.loads(run("expect", "--delta", "0.001", "--method", "mobius").output)
    assert obj["delta"] == "1/1000"


def test_expect_both_routes_identical():
    obj = json.loads(run("expect", "--delta", "1/100", "--method", "both").output)
    assert obj["pmf"] == obj["mobius"] and obj["equal"] is True
    assert from_text(obj["pmf"]) == expected_value_pmf(F(1, 100))
    assert obj["float"] == float(from_text(obj["pmf"]))


@pytest.mark.parametrize("delta", ["1/3", "2/9", "1/50", "3/1000"])
def test_expect_methods_byte_identical(delta):
    a = json.loads(run("expect", "--delta", delta, "--method", "pmf").output)["pmf"]
    b = json.loads(run("expect", "--delta", delta, "--method", "mobius").output)["mobius"]
    assert a == b


def test_expect_auto_switches_to_mobius_past_cap():
    obj = json.loads(run("--q-cap", "50", "expect", "--delta", "1/100").output)
    assert "mobius" in obj and "pmf" not in obj
    obj = json.loads(run("expect", "--delta", "1/100").output)
    assert "pmf" in obj


def test_sfunc_and_text_format():
    obj = json.loads(run("sfunc", "--t", "1/4").output)
    assert obj["S"] == "5/3"
    assert "S: 5/3" in run("sfunc", "--t", "1/4", "--format", "text").output


def test_decompose_csv():
    rows = list(csv.DictReader(io.StringIO(run("decompose", "--delta", "1/2").output)))
    half = next(r for r in rows if r["fraction"] == "1/2")
    assert (half["case"], half["lo"], half["hi"], half["length"]) == ("I", "1/4", "3/4", "1/2")
    assert sum(from_text(r["length"]) for r in rows) == 1


def test_verify_constants_exit_code():
    res = run("verify-constants", "--tolerance", "1e-8")
    assert res.exit_code == 0 and json.loads(res.output)["passed"] is True


def test_diagnostics_csv_round_trip():
    res = run("diagnostics", "--deltas", "1/100,1/1000")
    assert res.exit_code == 0
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert from_text(f"{rows[1]['exact_num']}/{rows[1]['exact_den']}") == expected_value_mobius(F(1, 1000))


def test_diagnostics_fails_on_reversed_sequence():
    assert run("diagnostics", "--deltas", "1/1000,1/100").exit_code == 1


def test_sample_and_compare_via_file(tmp_path):
    path = tmp_path / "hist.json"
    res = run("--output", str(path), "sample", "--delta", "1/10", "--n", "20000", "--seed", "4")
    assert res.exit_code == 0
    hist = EmpiricalHistogram.from_json(path.read_text())
    assert hist == sample_qmin(F(1, 10), 20000, seed=4)
    obj = json.loads(run("compare", "--histogram", str(path)).output)
    assert obj["sample_count"] == 20000 and abs(obj["z_score"]) < 4


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QMIN_OUTPUT_DIR", str(tmp_path))
    run("pmf", "--delta", "1/2")
    assert (tmp_path / "pmf.csv").read_text().startswith("q,mass_num")


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["pmf", "--delta", "2"], 2, "parse_error"),
        (["pmf"], 2, "parse_error"),
        (["--q-cap", "10", "pmf", "--delta", "1/100"], 4, "resource_limit"),
        (["expect", "--delta", "1/2", "--method", "mobius"], 3, "invalid_input"),
        (["sfunc", "--t", "-1"], 3, "invalid_input"),
        (["qmin", "--lo", "1", "--hi", "1/2"], 3, "invalid_interval"),
    ],
)
def test_error_objects(argv, code, kind, capsys):
    assert main(argv) == code
    err = json.loads(capsys.readouterr().err)
    assert err["error"]["type"] == kind
