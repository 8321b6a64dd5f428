import json
import subprocess
import sys

import pytest

from bellseq import cli, fine


def run_json(capsys, *argv):
    assert cli.run(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def test_correlate_bell(capsys):
    d = run_json(capsys, "correlate", "bell", "0", "60")
    assert d["value"]["re"] == -0.5 and d["value"]["im"] == 0.0
    assert d["scenario"] == "bell_pair" and d["angles"] == [0.0, 60.0]


def test_correlate_radians(capsys):
    d = run_json(capsys, "correlate", "bell_pair", "0", "1.0471975511965976", "--unit", "rad")
    assert d["value"]["re"] == -0.5


def test_fine_landmark(capsys):
    d = run_json(capsys, "fine", "0", "60", "120")
    assert d["feasible"] is False
    assert d["certificate"][0] == [-1, 1, -1]
    assert d["bell_violated"] is True


def test_demo_coins(capsys):
    d = run_json(capsys, "demo-coins")
    assert d["factorises"] is False and d["p_ab"] == 0.5 and d["product"] == 0.25


def test_equivalence(capsys):
    d = run_json(capsys, "equivalence", "10", "70")
    assert d["c_ab"] == -0.5 and d["matches"] is True


def test_maximize(capsys):
    d = run_json(capsys, "maximize", "chsh")
    assert d["value"] == pytest.approx(2 * 2 ** 0.5, abs=1e-6)


def test_fine_chsh(capsys):
    assert run_json(capsys, "fine-chsh", "-0.7", "-0.7", "-0.7", "0.7")["feasible"] is False
    assert run_json(capsys, "fine-chsh", "1", "1", "1", "1")["feasible"] is True
    d = run_json(capsys, "fine-chsh", "0", "90", "45", "-45", "--angles")
    assert d["feasible"] is False


def test_lhv_and_optics(capsys):
    d = run_json(capsys, "lhv", "0", "60", "--count", "1000", "--seed", "3")
    assert d["seed"] == 3 and d["samples"] == 1000
    d = run_json(capsys, "optics", "cascade", "0", "30")
    assert d["correlation"] == 0.5
    d = run_json(capsys, "optics", "chain", "0", "45", "90")
    assert d["intensity"] == 0.25


def test_csv_outputs(capsys):
    assert cli.run(["correlate", "bell_pair", "0", "60", "--samples", "4", "--emit-samples", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.strip().split("\n")
    assert rows[0] == "s1,s2" and len(rows) == 5
    assert cli.run(["scan-chsh", "--step", "90", "--format", "csv"]) == 0
    rows = capsys.readouterr().out.strip().split("\n")
    assert rows[0].startswith("angle1,angle2,angle3,angle4") and len(rows) == 1 + 4 ** 4
    assert cli.run(["optics", "cascade", "0", "--sweep", "0", "90", "45"]) == 0
    assert len(capsys.readouterr().out.strip().split("\n")) == 4


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert cli.run(["correlate", "bell", "0", "90", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["value"]["re"] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["correlate", "bell", "0", "abc"],
    ["correlate", "bell", "0"],
    ["fine-chsh", "2", "0", "0", "0"],
    ["correlate", "bell", "0", "1", "--seed", "-1"],
])
def test_argument_errors(argv, capsys):
    assert cli.run(argv) == 2
    assert capsys.readouterr().err


def test_invariant_violation_exit_code(monkeypatch, capsys):
    def broken(*args):
        raise fine.InvariantViolation("forced")
    monkeypatch.setattr(fine, "fine_check", broken)
    assert cli.run(["fine", "0", "60", "120"]) == 1
    assert "forced" in capsys.readouterr().err


def test_byte_determinism():
    argv = [sys.executable, "-m", "bellseq", "correlate", "bell", "10", "80", "--samples", "20000", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True, env={"BELLSEQ_THREADS": "3"}).stdout
    assert a == b and a


def test_twelve_significant_digits(capsys):
    d = run_json(capsys, "correlate", "bell", "0", "1")
    assert len(repr(d["value"]["re"]).lstrip("-0.").rstrip("0")) <= 12


def test_run_config_round_trip():
    ns = cli.build_parser().parse_args(["lhv", "0", "30", "--seed", "5", "--format", "csv"])
    cfg = cli.config_from_args(ns)
    assert cli.RunConfig.from_json(cfg.to_json()) == cfg
    assert cfg.seed == 5 and cfg.output == "csv" and cfg.angle_unit == "deg"
