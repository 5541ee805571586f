import csv
import json
import math
from pathlib import Path

import pytest

from cfsval.cli import run_cli
from cfsval.config import ConfigError, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def scenario2_doc(**scenario):
    doc = json.loads((CONFIGS / "scenario2.json").read_text())
    doc["scenario"].update(scenario)
    return doc


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_scenario2():
    cfg = parse_config((CONFIGS / "scenario2.json").read_bytes())
    assert cfg.arch.gamma_f == pytest.approx(math.radians(30.5))
    assert round(cfg.arch.gamma_f, 4) == 0.5323
    assert len(cfg.validation.pair_filter) == 15
    assert cfg.validation.delta == 0.1


def test_defaults_applied():
    doc = scenario2_doc()
    del doc["scenario"]["pairs"], doc["scenario"]["delta"], doc["estimate"], doc["output"]
    cfg = parse_config(json.dumps(doc))
    assert cfg.validation.delta == 0.1
    assert len(cfg.validation.pair_filter) == 15
    assert cfg.estimate.n_directions == 2500
    assert cfg.estimate.r_max == 27.0


def test_empty_document():
    with pytest.raises(ConfigError, match="missing field: architecture"):
        parse_config(b"")
    with pytest.raises(ConfigError, match="missing field: architecture"):
        parse_config(b"{}")


def test_negative_capsule_radius():
    doc = scenario2_doc()
    doc["architecture"]["r_c_mm"] = -1
    with pytest.raises(ConfigError, match="r_c_mm"):
        parse_config(json.dumps(doc))


@pytest.mark.parametrize("mutate, key", [
    (lambda d: d["architecture"].pop("z0_mm"), "z0_mm"),
    (lambda d: d["architecture"].update(gamma_m_deg=75), "gamma_m_deg"),
    (lambda d: d["architecture"].update(extra=1), "extra"),
    (lambda d: d.update(bogus={}), "bogus"),
    (lambda d: d["scenario"].update(n_s=0), "n_s"),
    (lambda d: d["scenario"].update(rodrigues=[1, 2]), "rodrigues"),
    (lambda d: d["scenario"].update(delta=1.5), "delta"),
    (lambda d: d["scenario"].update(pairs=[[1, 1]]), "pairs"),
    (lambda d: d["estimate"].update(tol_mm=-1), "tol_mm"),
    (lambda d: d["output"].update(formats=["pdf"]), "formats"),
])
def test_config_errors_name_the_key(mutate, key):
    doc = scenario2_doc()
    mutate(doc)
    with pytest.raises(ConfigError, match=key):
        parse_config(json.dumps(doc))


def test_malformed_json():
    with pytest.raises(ConfigError, match="malformed JSON"):
        parse_config(b"{not json")


def test_validate_command(tmp_path, capsys):
    out = tmp_path / "out"
    code = run_cli(["validate", "--config", str(CONFIGS / "scenario2.json"), "--out", str(out)])
    assert code == 0
    assert "verdict: validated" in capsys.readouterr().out
    summary = json.loads((out / "summary.json").read_text())
    assert summary["verdict"] == "validated"
    assert summary["unsafe_inside_cfs_count"] == 0
    assert summary["min_unsafe_radius_mm"] > 13.5
    with open(out / "samples.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["index", "x", "y", "z", "radius", "min_clearance", "worst_i", "worst_j", "safe"]
    assert len(rows) - 1 == summary["total_samples"]
    with open(out / "unsafe.csv") as fh:
        unsafe = list(csv.DictReader(fh))
    assert len(unsafe) == summary["unsafe_count"]
    assert all(r["safe"] == "0" and float(r["radius"]) > 13.5 for r in unsafe)
    assert all(len(r["x"].split(".")[1]) == 6 for r in unsafe)
    assert (out / "unsafe_points.png").stat().st_size > 0
    assert (out / "clearance_profile.png").stat().st_size > 0


def test_validate_inflated_exit_code(tmp_path):
    cfg = write(tmp_path, scenario2_doc(r3_mm=1.2 * 13.5))
    assert run_cli(["validate", "--config", cfg, "--out", str(tmp_path / "o"), "--no-figures"]) == 2


def test_bad_config_exit_code(tmp_path, capsys):
    cfg = write(tmp_path, {"architecture": {}})
    assert run_cli(["validate", "--config", cfg]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file_and_bad_args(tmp_path):
    assert run_cli(["validate", "--config", str(tmp_path / "nope.json")]) == 1
    assert run_cli(["frobnicate"]) == 1
    assert run_cli(["validate", "--config", str(CONFIGS / "scenario2.json"), "--threads", "-2"]) == 1


def test_check_pose_home(capsys):
    code = run_cli(["check-pose", "--config", str(CONFIGS / "scenario2.json"),
                    "--p", "0,0,300", "--c", "0,0,0"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [ln.split(",") for ln in lines[1:16]]
    assert len(rows) == 15
    assert all(float(r[1]) > 0 and r[2] == "0" for r in rows)


def test_check_pose_defaults_to_home(capsys):
    run_cli(["check-pose", "--config", str(CONFIGS / "scenario2.json")])
    default = capsys.readouterr().out
    run_cli(["check-pose", "--config", str(CONFIGS / "scenario2.json"), "--p", "0,0,300"])
    assert capsys.readouterr().out == default


def test_check_pose_colliding_exit(capsys):
    # deepest Scenario 2 unsafe sample, legs 2 and 3
    code = run_cli(["check-pose", "--config", str(CONFIGS / "scenario2.json"),
                    "--p=-12.67806021,6.26372232,300.50504652", "--c", "0.2534,0.6740,0.2653",
                    "--pairs", "2-3"])
    assert code == 2
    assert "2-3," in capsys.readouterr().out


def test_dump_samples(tmp_path):
    out = tmp_path / "d"
    assert run_cli(["dump-samples", "--config", str(CONFIGS / "scenario1.json"), "--out", str(out)]) == 0
    with open(out / "shell_samples.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y", "z", "radius"]
    assert len(rows) == 10001
    assert {r[3] for r in rows[1:]} == {"169.560000", "179.560000", "189.560000", "199.560000"}


def test_estimate_command(tmp_path, capsys):
    doc = scenario2_doc()
    doc["estimate"]["n_directions"] = 500
    cfg = write(tmp_path, doc)
    out = tmp_path / "e"
    assert run_cli(["estimate", "--config", cfg, "--out", str(out), "--profile"]) == 0
    summary = json.loads((out / "estimate.json").read_text())
    assert not summary["censored"]
    assert 13.0 < summary["r3_est_mm"] < 14.0
    assert (out / "collision_map.png").exists()
    assert "r3_est" in capsys.readouterr().out


def test_rerun_byte_identical(tmp_path):
    dirs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        run_cli(["validate", "--config", str(CONFIGS / "scenario1.json"), "--out", str(out)])
        dirs.append(out)
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == sorted(p.name for p in dirs[1].iterdir())
    for name in names:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(), name
