import csv
import json
import math
import subprocess
import sys

import pytest

from crestwave.cli import apply_overrides, ConfigError, main


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_flat_simulation_artifacts(tmp_path):
    out = tmp_path / "flat"
    code = main(["simulate", "--set", "grid_n=32", "--set", "dt=0.01", "--set", "t_end=1",
                 "--set", "output_cadence=0.1", "--set", "snapshot_times=[0.5]",
                 "--set", "svg=true", "--out", str(out)])
    assert code == 0
    data = rows(out / "energy.csv")
    assert data[0] == ["t", "ea_1", "ea_23", "ea_4", "eb_1", "eb_2", "eb_3", "anchor",
                       "total", "minA1", "holo_drift"]
    body = data[1:]
    assert len(body) == 11
    assert all(r[1:] == body[0][1:] for r in body)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["format_version"] == 1
    assert summary["status"] == "ok" and summary["min_A1"] == 1.0
    assert {"max_holo_drift", "wall_time"} <= set(summary)
    snap = json.loads((out / "snapshots" / "t=0.5.json").read_text())
    assert snap["format_version"] == 1 and snap["grid_n"] == 32 and len(snap["W"]) == 32
    assert (out / "energy.svg").read_text().startswith("<svg")


def test_mode_simulation_reports_period(tmp_path):
    cfg = {"grid_n": 64, "dt": 0.02, "t_end": 8.0, "output_cadence": 0.05,
           "ic": {"kind": "mode", "k": -1, "eps": 1e-4}}
    path = tmp_path / "mode.json"
    path.write_text(json.dumps(cfg))
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "m")]) == 0
    summary = json.loads((tmp_path / "m" / "summary.json").read_text())
    assert summary["measured_period"] == pytest.approx(2 * math.sqrt(math.pi), rel=0.01)


def test_simulation_is_deterministic(tmp_path):
    args = ["simulate", "--set", "grid_n=32", "--set", "dt=0.01", "--set", "t_end=0.2",
            "--set", "output_cadence=0.05", "--set", "ic.kind=random", "--seed", "4"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "energy.csv").read_bytes()
    assert a == (tmp_path / "b" / "energy.csv").read_bytes()
    assert main(args[:-1] + ["5", "--out", str(tmp_path / "c")]) == 0
    assert a != (tmp_path / "c" / "energy.csv").read_bytes()


def test_malformed_config_exits_2_without_artifacts(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "grid_n": 64,\n  "t_end": ,\n}\n')
    out = tmp_path / "never"
    assert main(["simulate", "--config", str(bad), "--out", str(out)]) == 2
    assert not out.exists()
    err = capsys.readouterr().err
    assert "bad.json:3" in err and '"t_end": ,' in err


@pytest.mark.parametrize("override", ["grid_n=100", "colour=blue", "ic.kind=wave",
                                      'ic={"kind": "mode", "k": -40}'])
def test_invalid_config_values_exit_2(tmp_path, override):
    out = tmp_path / "never"
    assert main(["simulate", "--set", "grid_n=64", "--set", override, "--out", str(out)]) == 2
    assert not out.exists()


def test_failed_run_exits_1_and_keeps_partial_output(tmp_path):
    out = tmp_path / "blow"
    code = main(["simulate", "--set", "grid_n=64", "--set", "dt=0.5", "--set", "t_end=20",
                 "--set", "output_cadence=0.5", "--set",
                 'ic={"kind": "mode", "k": -3, "eps": 0.3}', "--out", str(out)])
    assert code == 1
    assert len(rows(out / "energy.csv")) >= 2
    assert json.loads((out / "summary.json").read_text())["status"] == "failed"


def test_verify_identities(tmp_path, capsys):
    code = main(["verify", "--set", "n=64", "--set", "trials=3", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify.json").read_text())
    assert report["passed"] and report["format_version"] == 1
    assert "hilbert_square" in capsys.readouterr().out


def test_verify_all_has_every_suite(tmp_path):
    code = main(["verify", "--set", "suite=all", "--set", "n=32", "--set", "trials=2",
                 "--out", str(tmp_path)])
    report = json.loads((tmp_path / "verify.json").read_text())
    assert [r["suite"] for r in report["reports"]] == ["identities", "commutators",
                                                      "inequalities", "taylor"]
    assert code == (0 if report["passed"] else 1)


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--set", "suite=everything"]) == 2
    assert "usage" in capsys.readouterr().err


def test_scan_angles(tmp_path):
    assert main(["scan-angles", "--out", str(tmp_path)]) == 0
    data = rows(tmp_path / "scan.csv")
    assert data[0] == ["r", "n", "norm1", "norm2", "classification"]
    labels = {float(r[0]): r[4] for r in data[1:]}
    assert labels == {1.5: "divergent", 2.5: "convergent"}


def test_scan_angles_empty_r_list(tmp_path):
    assert main(["scan-angles", "--set", "r_list=[]", "--out", str(tmp_path / "x")]) == 2
    assert not (tmp_path / "x").exists()


def test_energy_report_from_snapshot(tmp_path, capsys):
    run = tmp_path / "run"
    main(["simulate", "--set", "grid_n=32", "--set", "dt=0.01", "--set", "t_end=0.1",
          "--set", "snapshot_times=[0.1]", "--set", 'ic={"kind": "mode", "eps": 0.01}',
          "--out", str(run)])
    code = main(["energy-report", "--set", f"snapshot={run / 'snapshots' / 't=0.1.json'}",
                 "--out", str(tmp_path / "rep")])
    assert code == 0
    doc = json.loads((tmp_path / "rep" / "energy_report.json").read_text())
    assert doc["t"] == pytest.approx(0.1)
    assert len(doc["characterization"]) == 7 and len(doc["controlled"]) == 12
    last = rows(run / "energy.csv")[-1]
    assert doc["energy"]["total"] == pytest.approx(float(last[8]), rel=1e-12)


def test_energy_report_missing_snapshot():
    assert main(["energy-report", "--set", "snapshot=/nonexistent.json"]) == 2


def test_overrides():
    cfg = apply_overrides({"ic": {"kind": "mode"}}, ["ic.eps=0.1", "t_end=2", "name=abc"])
    assert cfg == {"ic": {"kind": "mode", "eps": 0.1}, "t_end": 2, "name": "abc"}
    with pytest.raises(ConfigError):
        apply_overrides({}, ["novalue"])
    with pytest.raises(ConfigError):
        apply_overrides({"a": 1}, ["a.b=2"])


def test_usage_errors():
    assert main([]) == 2
    assert main(["simulate", "--jobs", "0"]) == 2


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "crestwave", "verify", "--set", "n=32",
                        "--set", "trials=1"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
