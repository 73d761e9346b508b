import json
import subprocess
import sys

import pytest

from densecert.cli import EXIT_USAGE, Report, dispatch, emit, parse


def run(*argv):
    code, report, info = dispatch(list(argv))
    return code, report


def cert(*argv):
    code, report = run(*argv)
    assert report is not None, argv
    return code, report.verdict, report.certificate


def test_g_invariant_report():
    code, verdict, c = cert("g-invariant", "-d", "-5", "-p", "5")
    assert (code, verdict) == (0, "verified")
    assert c["g"] == "2" and c["residual_invariants"] == ["5", "10"]
    assert cert("g-invariant", "-d", "2", "-p", "7")[2]["g"] == "0"


def test_documented_examples():
    assert cert("modular1", "-p", "3", "-n", "3", "-l", "2", "-m", "4")[:2] == (0, "verified")
    code, verdict, c = cert("fiber", "-d", "-1", "-p", "2")
    assert c["kind"] == "AdditiveTimesMu2" and code == 0
    assert cert("modular1", "-p", "3", "-n", "3", "-l", "7")[:2] == (1, "rejected")
    assert cert("topgen", "-p", "5", "-l", "2")[:2] == (0, "accepted")
    assert cert("topgen", "-p", "7")[2]["l"] == "3"
    assert cert("isogclass", "-p", "2", "-n", "3")[2]["field_d"] == "-7"
    assert cert("weil", "-t", "0", "-p", "2", "--real")[2]["dim"] == "2"
    assert cert("unitary-index", "-d", "-7", "-p", "2", "-l", "11", "-m", "3")[2]["index"] == "2"


def test_exit_codes():
    assert cert("density-check", "-d", "2", "-p", "7")[:2] == (0, "dense")
    assert cert("density-check", "-d", "2", "-p", "2", "--sigma", "all")[:2] == (1, "not-dense")
    assert cert("density-check", "-d", "-7", "-p", "2", "-S", "5")[:2] == (0, "dense")
    assert cert("torus-search", "-d", "-1", "-p", "5", "--bound", "12")[:2] == (1, "exhausted")
    assert cert("torus-search", "-d", "-1", "-p", "5")[2]["l"] == "13"
    assert cert("witness", "-d", "-5", "-p", "5", "--bound", "50")[:2] == (1, "exhausted")
    assert cert("weil", "-t", "3", "-p", "2")[:2] == (1, "failed")
    assert cert("quaternion-verify", "-p", "3", "-l", "2", "-m", "2")[:2] == (0, "verified")


def test_inconclusive_exit_code():
    r = Report("density-check", {}, "inconclusive")
    assert r.exit_code == 2


def test_usage_errors():
    assert run("g-invariant", "-d", "2")[0] == EXIT_USAGE
    assert run("nonsense")[0] == EXIT_USAGE
    assert run("g-invariant", "-d", "x", "-p", "2")[0] == EXIT_USAGE
    assert run("density-check", "-d", "-1", "-p", "5", "-S", "5")[0] == EXIT_USAGE
    assert run("g-invariant", "-d", "4", "-p", "2")[0] == EXIT_USAGE
    assert run("density-check", "-d", "2", "-p", "7", "--sigma", "3")[0] == EXIT_USAGE
    code, report, msg = dispatch(["g-invariant", "-d", "2"])
    assert report is None and "usage:" in msg


def test_json_shape_and_roundtrip():
    code, report = run("g-invariant", "-d", "2", "-p", "2", "--sigma", "all")
    text = emit(report)
    obj = json.loads(text)
    assert obj["schema"] == "1" and list(obj) == sorted(obj)
    assert parse(text) == report
    empty = Report("fiber", {}, "verified")
    assert json.loads(emit(empty))["certificate"] == {}
    assert parse(emit(empty)) == empty


def test_quaternion_report_has_stabilization():
    c = cert("quaternion-verify", "-p", "2", "-l", "5", "-m", "3", "--kmax", "4")[2]
    assert c["stabilized_at"] == "2" and c["index"] == "1" and c["target_index"] == "2"


@pytest.mark.parametrize("argv", [
    ["g-invariant", "-d", "-1", "-p", "5"],
    ["witness", "-d", "2", "-p", "2", "--sigma", "all"],
    ["torus-search", "-d", "-7", "-p", "2"],
    ["quaternion-verify", "-p", "3", "-l", "2", "-m", "1"],
])
def test_deterministic_json(argv):
    a = emit(run(*argv)[1], timing=False)
    b = emit(run(*argv)[1], timing=False)
    assert a == b


def test_text_format():
    code, report, fmt = dispatch(["fiber", "-d", "-1", "-p", "5", "--format", "text"])
    assert fmt == "text"
    out = emit(report, fmt)
    assert "Multiplicative" in out and out.splitlines()[0].split() == ["command", "fiber"]


def test_witness_then_density_check():
    c = cert("witness", "-d", "-1", "-p", "5")[2]
    assert c["density"] == "dense"
    assert cert("density-check", "-d", "-1", "-p", "5", "-S", ",".join(c["S_spec"]))[:2] == (0, "dense")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "densecert", "fiber", "-d", "-1", "-p", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["certificate"]["kind"] == "NormOneTorus"
    out = subprocess.run([sys.executable, "-m", "densecert", "fiber"], capture_output=True, text=True)
    assert out.returncode == EXIT_USAGE and "usage" in out.stderr
