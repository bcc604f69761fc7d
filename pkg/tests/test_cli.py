"""CLI parsing, dispatch, exit codes, and output files."""

import csv
import json
import subprocess
import sys

import pytest

from mobidelay.cli import (
    EXIT_CHECK,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    UsageError,
    main,
    parse_args,
    run,
)
from mobidelay.world import DEFAULT_SEED


# ---------------------------------------------------------------------------
# parsing


def test_parse_defaults():
    cfg = parse_args(["bounds"])
    assert cfg.subcommand == "bounds"
    assert cfg.model == "iid"
    assert cfg.alpha == ()
    assert cfg.n == (100,)
    assert cfg.r is None and cfg.beta is None
    assert cfg.trials is None and cfg.effective_trials == 100_000
    assert cfg.seed == DEFAULT_SEED
    assert cfg.workers == 1
    assert cfg.out_dir == "out"
    assert cfg.fmt == "json"
    assert cfg.check is False


def test_parse_all_flags():
    cfg = parse_args([
        "meet", "--model", "levy", "--alpha", "1.5", "--n", "400",
        "--r", "4", "--trials", "5000", "--horizon", "100", "--seed", "7",
        "--workers", "2", "--out", "x", "--format", "both", "--check",
    ])
    assert cfg.subcommand == "meet"
    assert cfg.model == "levy"
    assert cfg.alpha == (1.5,)
    assert cfg.n == (400,)
    assert cfg.r == 4.0
    assert cfg.trials == 5000 and cfg.effective_trials == 5000
    assert cfg.horizon == 100
    assert cfg.seed == 7
    assert cfg.workers == 2
    assert cfg.out_dir == "x"
    assert cfg.fmt == "both"
    assert cfg.check is True


def test_parse_comma_lists():
    cfg = parse_args(["sweep", "--n", "250,500,1000", "--beta", "0.125"])
    assert cfg.n == (250, 500, 1000)
    cfg = parse_args(["dominance", "--model", "levy", "--alpha", "0.5,2.0",
                      "--n", "400"])
    assert cfg.alpha == (0.5, 2.0)


def test_parse_domain_errors():
    with pytest.raises(UsageError, match=r"beta must be in \[0, 0.25\]"):
        parse_args(["sweep", "--beta", "0.3"])
    with pytest.raises(UsageError, match=r"alpha must be in \(0, 2\]"):
        parse_args(["bounds", "--alpha", "0"])
    with pytest.raises(UsageError, match="--alpha"):
        parse_args(["bounds", "--alpha", "fast"])
    with pytest.raises(UsageError, match="at most one"):
        parse_args(["bounds", "--r", "2", "--beta", "0.1"])
    with pytest.raises(UsageError, match="--n"):
        parse_args(["bounds", "--n", "many"])
    with pytest.raises(UsageError, match=">= 2"):
        parse_args(["bounds", "--n", "1"])
    with pytest.raises(UsageError, match="--model"):
        parse_args(["bounds", "--model", "brownian"])
    with pytest.raises(UsageError, match="--format"):
        parse_args(["bounds", "--format", "xml"])
    with pytest.raises(UsageError):
        parse_args(["simulate"])  # unknown subcommand


def test_config_roundtrip():
    cfg = parse_args(["dominance", "--model", "levy", "--alpha", "0.5,2.0",
                      "--n", "400", "--trials", "3000", "--check"])
    again = RunConfig.from_dict(cfg.to_dict())
    assert again == cfg
    assert isinstance(cfg.to_dict()["alpha"], list)  # flat JSON types


def test_config_file_precedence(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"trials": 500, "seed": 9, "fmt": "both"}))
    cfg = parse_args(["bounds", "--config", str(conf), "--seed", "11"])
    assert cfg.seed == 11       # flag beats file
    assert cfg.trials == 500    # file beats default
    assert cfg.fmt == "both"
    assert cfg.model == "iid"   # untouched default


def test_config_file_errors(tmp_path):
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"velocity": 3}))
    with pytest.raises(UsageError, match="velocity"):
        parse_args(["bounds", "--config", str(conf)])
    conf.write_text("[1, 2]")
    with pytest.raises(UsageError, match="JSON object"):
        parse_args(["bounds", "--config", str(conf)])
    conf.write_text("{broken")
    with pytest.raises(UsageError, match="not valid JSON"):
        parse_args(["bounds", "--config", str(conf)])
    with pytest.raises(UsageError, match="--config"):
        parse_args(["bounds", "--config", str(tmp_path / "missing.json")])


# ---------------------------------------------------------------------------
# dispatch and exit codes


def test_bounds_writes_expected_json(tmp_path):
    out = tmp_path / "o"
    code = main(["bounds", "--n", "100", "--r", "2", "--trials", "2000",
                 "--out", str(out), "--format", "both"])
    assert code == EXIT_OK
    doc = json.loads((out / "bounds.json").read_text())
    assert doc["p_out_lower"] == 0.96
    assert doc["p_out_upper"] == pytest.approx(1.0 - 4.0 / 300.0)
    with open(out / "bounds.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    keys = {row["key"] for row in rows}
    assert "p_out_lower" in keys and "u_bar.1" in keys


def test_validation_failure_exits_1(tmp_path, capsys):
    code = main(["bounds", "--n", "100", "--r", "50",
                 "--out", str(tmp_path / "o")])
    assert code == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_usage_failure_exits_1(capsys):
    assert main(["bounds", "--beta", "0.9"]) == EXIT_USAGE
    assert "beta must be in [0, 0.25]" in capsys.readouterr().err


def test_delay_check_censoring_exit_codes(tmp_path):
    base = ["delay", "--n", "100", "--trials", "400", "--seed", "5",
            "--check"]
    ok = main(base + ["--horizon", "2000", "--out", str(tmp_path / "a")])
    assert ok == EXIT_OK
    bad = main(base + ["--horizon", "1", "--out", str(tmp_path / "b")])
    assert bad == EXIT_CHECK
    row = json.loads((tmp_path / "b" / "delay.json").read_text())
    assert row["censored_fraction"] >= 0.01


def test_gof_check_passes(tmp_path):
    code = main(["gof", "--n", "500", "--r", "5", "--trials", "30000",
                 "--check", "--out", str(tmp_path / "o")])
    assert code == EXIT_OK
    row = json.loads((tmp_path / "o" / "gof.json").read_text())
    assert row["passed"] is True
    assert row["dof"] >= 1


def test_sweep_check_iid_slope(tmp_path):
    code = main(["sweep", "--n", "64,128,256", "--beta", "0",
                 "--trials", "1000", "--horizon", "2000",
                 "--format", "both", "--check", "--out", str(tmp_path / "o")])
    assert code == EXIT_OK
    doc = json.loads((tmp_path / "o" / "sweep.json").read_text())
    assert doc["valid"] is True
    assert doc["slope"] <= 0.65
    with open(tmp_path / "o" / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(row["n"]) for row in rows] == [64, 128, 256]


def test_meet_check_and_determinism(tmp_path):
    base = ["meet", "--n", "100", "--r", "2", "--trials", "4000", "--check"]
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert main(base + ["--format", "both", "--out", str(a)]) == EXIT_OK
    assert main(base + ["--format", "both", "--out", str(b)]) == EXIT_OK
    assert (a / "meet.json").read_bytes() == (b / "meet.json").read_bytes()
    assert (a / "meet.csv").read_bytes() == (b / "meet.csv").read_bytes()


def test_dominance_run(tmp_path):
    code = main(["dominance", "--model", "levy", "--alpha", "0.8,1.6",
                 "--n", "64", "--trials", "600", "--horizon", "60",
                 "--format", "csv", "--out", str(tmp_path / "o")])
    assert code == EXIT_OK
    with open(tmp_path / "o" / "dominance.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 51  # t = 0..50
    assert rows[0]["t"] == "0"


def test_dominance_rejects_iid():
    cfg = parse_args(["dominance", "--n", "64"])
    assert run(cfg) == EXIT_USAGE


def test_sweep_r_flag_rejected_for_grids():
    cfg = parse_args(["sweep", "--n", "64,128,256", "--r", "2",
                      "--trials", "1000"])
    assert run(cfg) == EXIT_USAGE


# ---------------------------------------------------------------------------
# subprocess surface


def test_module_entry_point(tmp_path):
    out = tmp_path / "o"
    proc = subprocess.run(
        [sys.executable, "-m", "mobidelay.cli", "bounds", "--n", "100",
         "--r", "2", "--trials", "0", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (out / "bounds.json").exists()


def test_help_documents_defaults():
    proc = subprocess.run(
        [sys.executable, "-m", "mobidelay.cli", "bounds", "--help"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "0x5EED_CAFE" in proc.stdout
    assert "defaults" in proc.stdout


def test_unknown_flag_exits_1():
    proc = subprocess.run(
        [sys.executable, "-m", "mobidelay.cli", "bounds", "--speed", "9"],
        capture_output=True, text=True)
    assert proc.returncode == 1
    assert "--speed" in proc.stderr
