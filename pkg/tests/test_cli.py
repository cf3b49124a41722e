import json
import subprocess
import sys

import pytest

from weaklip.cli import SUBCOMMANDS, read_config, run_cli
from weaklip.harness import FIELDS, parse_records_csv


def test_np_ratio_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = run_cli(["np-ratio", "--dim", "16", "--trials", "10", "--function", "abs",
                    "--seed", "1", "--out", str(out), "--format", "csv"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(FIELDS) and len(lines) == 11
    recs = parse_records_csv(out.read_text())
    assert [r.trial for r in recs] == list(range(10))
    assert all(r.lhs >= 0 and r.rhs >= 0 for r in recs)
    assert capsys.readouterr().out == ""


def test_identity_check_passes(capsys):
    assert run_cli(["identity-check"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert len(rows) == 201
    assert {r.split(",")[4] for r in rows[1:]} == {"abs", "sin", "piecewise_linear"}


def test_usage_errors(capsys):
    assert run_cli([]) == 2
    assert "usage" in capsys.readouterr().err
    assert run_cli(["np-ratio", "--bogus", "1"]) == 2
    assert run_cli(["no-such-command"]) == 2
    assert run_cli(["np-ratio", "--function", "no-such-function"]) == 2
    assert "usage" in capsys.readouterr().err


def test_missing_config_is_usage_error(tmp_path, capsys):
    assert run_cli(["np-ratio", "--config", str(tmp_path / "absent.cfg")]) == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# pinned small run\ntrials = 3\ndim=5\nformat=jsonl\nseed=9\n")
    assert read_config(cfg)["dim"] == "5"
    assert run_cli(["np-ratio", "--config", str(cfg), "--trials", "2"]) == 0
    rows = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert len(rows) == 2 and all(r["dim"] == 5 and r["seed"] == 9 for r in rows)
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run_cli(["np-ratio", "--config", str(bad)]) == 2


def test_repeat_runs_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run_cli(["perturb-ratio", "--trials", "4", "--dim", "8", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_breached_check_exits_one(capsys):
    code = run_cli(["np-ratio", "--trials", "3", "--dim", "6", "--tol", "1e-6"])
    assert code == 1
    assert "check failed" in capsys.readouterr().err


@pytest.mark.parametrize("args", [
    ["perturb-ratio"],
    ["fp-scaling", "--trials", "2", "--dim", "16"],
    ["contrast", "--trials", "3", "--dims", "4,8"],
    ["smoothing"],
    ["kernel-check"],
    ["tensor-check", "--trials", "5"],
])
def test_subcommands_pass_by_default(args, capsys):
    assert run_cli(args) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(FIELDS)


def test_every_subcommand_has_a_handler():
    from weaklip.cli import DEFAULTS, HANDLERS
    assert set(SUBCOMMANDS) == set(HANDLERS) == set(DEFAULTS)


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "weaklip.cli", "np-ratio", "--trials", "2", "--dim", "4"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 3
