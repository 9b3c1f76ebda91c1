import json

import pytest

from fracspray.cli import main


def test_verify_prints_error_report(capsys):
    rc = main(["verify", "--case", "appendix1", "--alpha", "0.9"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "max_error" in out and "l2_error" in out


def test_verify_from_bundled_config(capsys):
    rc = main(["verify", "appendix1"])
    assert rc == 0
    assert "appendix1" in capsys.readouterr().out


def test_verify_requires_order(capsys):
    rc = main(["verify", "--case", "appendix2"])
    assert rc == 1
    assert "beta" in capsys.readouterr().err


def test_run_missing_file(capsys):
    rc = main(["run", "missing.cfg"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "not found" in err
    assert "Traceback" not in err


def test_unknown_flag_exits_one(capsys):
    rc = main(["run", "example1", "--frobnicate"])
    assert rc == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_verb_exits_one(capsys):
    rc = main(["explode"])
    assert rc == 1


def test_run_bundled_with_overrides(tmp_path, capsys):
    rc = main([
        "run", "example1", "-o", str(tmp_path / "run"),
        "--set", "timing.t_end=0.2", "--set", "output.snapshot_times=",
    ])
    assert rc == 0
    assert (tmp_path / "run" / "timeseries.csv").is_file()
    assert "peak=" in capsys.readouterr().out


def test_run_bad_override_value(capsys):
    rc = main(["run", "example1", "--set", "model.alpha=fast"])
    assert rc == 1
    assert "model.alpha" in capsys.readouterr().err


def test_run_unstable_scenario_exits_two(tmp_path, capsys):
    rc = main([
        "run", "example1", "-o", str(tmp_path),
        "--set", "timing.tau=0.2", "--set", "timing.control_period=0.2",
        "--set", "output.snapshot_times=",
    ])
    assert rc == 2
    assert "numerical failure" in capsys.readouterr().err


def test_sweep_prints_table(tmp_path, capsys):
    rc = main([
        "sweep", "example1", "--param", "k_p", "--values", "4,6",
        "-o", str(tmp_path),
        "--set", "timing.t_end=0.2", "--set", "output.snapshot_times=",
    ])
    assert rc == 0
    out = capsys.readouterr().out
    assert "final/peak" in out
    assert "lowest final total" in out
    records = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert {r["value"] for r in records} == {4.0, 6.0}


def test_convergence_prints_orders(capsys):
    rc = main(["convergence", "--case", "appendix1-temporal", "--orders", "0.8"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "slope" in out


def test_demo_cvt_cost_decreases(capsys):
    rc = main(["demo-cvt", "--iterations", "8"])
    assert rc == 0
    lines = [l for l in capsys.readouterr().out.splitlines()[1:] if l.strip()]
    costs = [float(l.split()[1]) for l in lines]
    assert len(costs) >= 2
    assert all(b <= a * (1 + 1e-12) for a, b in zip(costs, costs[1:]))


def test_out_env_var_sets_default_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRACSPRAY_OUT", str(tmp_path / "envout"))
    rc = main([
        "run", "example1",
        "--set", "timing.t_end=0.2", "--set", "output.snapshot_times=",
    ])
    assert rc == 0
    assert (tmp_path / "envout" / "example1" / "timeseries.csv").is_file()
