"""Tests for the command-line client (in-process service mode)."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest
from click.testing import CliRunner

from fieldscan.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, *args, **kw):
    return runner.invoke(main, list(args), env={"FIELDSCAN_SERVER": ""}, **kw)


def test_bounds_command(runner):
    res = invoke(runner, "bounds", "--degree", "8", "--r1", "2", "--r2", "3",
                 "--norms", "2,3,4,5,7")
    assert res.exit_code == 0
    lines = [l for l in res.output.splitlines() if l and not l.startswith("#")]
    assert len(lines) == 6  # header + five rows
    assert lines[1].split()[0] == "2"


def test_bounds_json_flag(runner):
    res = invoke(runner, "bounds", "--degree", "4", "--r1", "2", "--r2", "1",
                 "--norms", "", "--as-json")
    assert res.exit_code == 0
    rows = json.loads(res.output)
    assert rows[0]["norm"] == 0


def test_plan_command(runner, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("degree=3\nr1=1\nr2=1\ndisc_bound=23\n")
    res = invoke(runner, "plan", "--config", str(cfg), "--blocks")
    assert res.exit_code == 0
    assert "# 8 cells" in res.output
    assert "s0_an-1_c0" in res.output


def test_plan_flag_overrides_config(runner, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("degree=3\nr1=1\nr2=1\ndisc_bound=23\nparity_values=0,1\n")
    res = invoke(runner, "plan", "--config", str(cfg), "--parity-values", "0")
    assert res.exit_code == 0
    assert "# 4 cells" in res.output


def test_config_error_exit_code(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("degree=3\nr1=2\nr2=1\ndisc_bound=23\n")  # 2+2 != 3
    res = invoke(runner, "plan", "--config", str(cfg))
    assert res.exit_code == 2


def test_verify_command(runner, tmp_path):
    pf = tmp_path / "polys.txt"
    pf.write_text("# candidates\n1,0,-1,-1\n1 0 1 1\n1,0,0,-8\n")
    res = invoke(runner, "verify", str(pf), "--degree", "3", "--r1", "1",
                 "--r2", "1", "--disc-bound", "50")
    assert res.exit_code == 0
    out = res.output.splitlines()
    assert out[0].split() == ["accepted", "1,0,-1,-1", "field_disc=-23"]
    assert out[1].startswith("  accepted")
    assert "rejected" in out[2]


def test_verify_empty_file_is_config_error(runner, tmp_path):
    pf = tmp_path / "empty.txt"
    pf.write_text("# nothing\n")
    res = invoke(runner, "verify", str(pf), "--degree", "3", "--r1", "1",
                 "--r2", "1", "--disc-bound", "50")
    assert res.exit_code == 2


def test_resume_without_checkpoint_is_config_error(runner, tmp_path):
    res = invoke(runner, "resume", "--degree", "3", "--r1", "1", "--r2", "1",
                 "--disc-bound", "50",
                 "--checkpoint-path", str(tmp_path / "nope.json"))
    assert res.exit_code == 2


def test_run_command_end_to_end(runner, tmp_path):
    out = tmp_path / "t.txt"
    res = invoke(runner, "run", "--quiet",
                 "--degree", "3", "--r1", "1", "--r2", "1", "--disc-bound", "50",
                 "--output-path", str(out),
                 "--checkpoint-path", str(tmp_path / "t.ckpt"))
    assert res.exit_code == 0, res.output
    assert "minimum |field disc|: 23" in res.output
    table = out.read_text()
    assert "0,-1,-1; -23; -23; 1,1; -" in table
    assert os.path.exists(str(out) + ".json")
    assert os.path.exists(str(out) + ".export")


def test_run_twice_is_idempotent(runner, tmp_path):
    args = ["run", "--quiet", "--degree", "3", "--r1", "1", "--r2", "1",
            "--disc-bound", "50", "--output-path", str(tmp_path / "t.txt"),
            "--checkpoint-path", str(tmp_path / "t.ckpt")]
    assert invoke(runner, *args).exit_code == 0
    first = [l for l in (tmp_path / "t.txt").read_text().splitlines()
             if not l.startswith("elapsed")]
    assert invoke(runner, *args).exit_code == 0
    second = [l for l in (tmp_path / "t.txt").read_text().splitlines()
              if not l.startswith("elapsed")]
    assert first == second


def test_run_as_subprocess(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("degree = 3\nr1 = 1\nr2 = 1\ndisc_bound = 50\n"
                   "output_path = sub.txt\ncheckpoint_path = sub.ckpt\n")
    proc = subprocess.run(
        [sys.executable, "-m", "fieldscan.cli", "run", "--config", "s.cfg",
         "--quiet"],
        cwd=tmp_path, capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert "minimum |field disc|: 23" in proc.stdout
    assert (tmp_path / "sub.txt").exists()


def test_workers_env_override(runner, tmp_path):
    out = tmp_path / "e.txt"
    res = runner.invoke(main, [
        "run", "--quiet", "--degree", "3", "--r1", "1", "--r2", "1",
        "--disc-bound", "50", "--output-path", str(out),
        "--checkpoint-path", str(tmp_path / "e.ckpt")],
        env={"FIELDSCAN_SERVER": "", "FIELDSCAN_WORKERS": "2"})
    assert res.exit_code == 0, res.output
    assert "minimum |field disc|: 23" in res.output
