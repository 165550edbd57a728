import json
import math

import pytest

from oscsplit.cli import main
from oscsplit.config import kg_desk_config, maxwell_desk_config, write_config
from oscsplit.experiments import load_records


@pytest.fixture()
def maxwell_cfg(tmp_path):
    path = tmp_path / "maxwell.json"
    write_config(maxwell_desk_config(n=96, rho=1600.0), path)
    return path


@pytest.fixture()
def kg_cfg(tmp_path):
    path = tmp_path / "kg.json"
    write_config(kg_desk_config(n=60, omega=50.0), path)
    return path


def test_validate_desk_setup(tmp_path, capsys):
    path = tmp_path / "desk.json"
    write_config(maxwell_desk_config(), path)
    assert main(["validate", "--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert "ALL PASS" in out


def test_validate_missing_key(tmp_path, capsys):
    path = tmp_path / "broken.json"
    cfg = maxwell_desk_config()
    del cfg["foil"]
    write_config(cfg, path)
    assert main(["validate", "--config", str(path)]) == 2
    assert "foil" in capsys.readouterr().err


def test_simulate_writes_csv_and_manifest(maxwell_cfg, tmp_path):
    out = tmp_path / "traj.csv"
    rc = main(["simulate", "--config", str(maxwell_cfg), "--tau", "0.05",
               "--steps", "40", "--filter", "new", "--snapshots", "4",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t,node,x,p,e,b"
    manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "simulate"
    assert manifest["params"]["tau"] == 0.05
    assert manifest["config"]["problem"] == "maxwell1d"


def test_simulate_resonant_unfiltered_never_crashes(maxwell_cfg, tmp_path):
    # frequency 40 here; run right at the first resonant step size
    tau = 2 * math.pi / 40.0
    rc = main(["simulate", "--config", str(maxwell_cfg), "--tau", str(tau),
               "--steps", "500", "--filter", "none",
               "--out", str(tmp_path / "res.csv")])
    assert rc in (0, 3)


def test_config_not_mutated(maxwell_cfg, tmp_path):
    before = maxwell_cfg.read_bytes()
    main(["simulate", "--config", str(maxwell_cfg), "--tau", "0.05",
          "--steps", "10", "--filter", "new", "--out", str(tmp_path / "o.csv")])
    assert maxwell_cfg.read_bytes() == before


def test_reference_maxwell(maxwell_cfg, tmp_path):
    out = tmp_path / "ref.csv"
    assert main(["reference", "--config", str(maxwell_cfg), "--t", "1.5",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "node,x,p,e,b"
    assert len(lines) == 97


def test_reference_kg(kg_cfg, tmp_path):
    out = tmp_path / "ref.csv"
    assert main(["reference", "--config", str(kg_cfg), "--t", "0.5",
                 "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0] == "node,x,e,edot"


def test_verify_filters_csv(tmp_path):
    out = tmp_path / "report.csv"
    assert main(["verify-filters", "--set", "new", "--zmax", "25.0",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "condition,sup,argmax_z,verdict"
    assert any(ln.startswith("13a,") for ln in lines)


def test_sweep_and_reload(maxwell_cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--config", str(maxwell_cfg), "--method", "triple_split",
               "--filter", "new", "--T", "1.0", "--tau-log", "0.01:0.05:4",
               "--jobs", "1", "--out", str(out)])
    assert rc == 0
    recs = load_records(out)
    assert len(recs) == 4
    manifest = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
    assert manifest["params"]["tau_log"] == "0.01:0.05:4"


def test_sweep_zoom(kg_cfg, tmp_path):
    out = tmp_path / "zoom.csv"
    rc = main(["sweep", "--config", str(kg_cfg), "--method", "kg_two_step",
               "--filter", "A", "--T", "1.0", "--zoom", "1:0.99:1.01:5",
               "--jobs", "1", "--out", str(out)])
    assert rc == 0
    recs = load_records(out)
    # 5 window points plus the exact center, deduplicated when they coincide
    assert len(recs) in (5, 6)
    center = 2 * math.pi / 50.0
    assert any(abs(r.tau - center) < 1e-15 for r in recs)


def test_sweep_kg_interaction_config(tmp_path):
    path = tmp_path / "kgi.json"
    from oscsplit.config import kg_interaction_config

    cfg = kg_interaction_config(n=60, omega=50.0)
    cfg["cutoff"] = {"start": 8.3, "end": 9.8}
    write_config(cfg, path)
    out = tmp_path / "kgi.csv"
    rc = main(["sweep", "--config", str(path), "--method", "kg_two_step",
               "--filter", "G", "--T", "1.0", "--tau-log", "0.005:0.02:4",
               "--jobs", "1", "--out", str(out)])
    assert rc == 0
    assert len(load_records(out)) == 4


def test_sweep_rejects_inverted_range(maxwell_cfg, tmp_path, capsys):
    rc = main(["sweep", "--config", str(maxwell_cfg), "--T", "1.0",
               "--tau-log", "0.05:0.01:4", "--out", str(tmp_path / "x.csv")])
    assert rc == 2
    assert "--tau-log" in capsys.readouterr().err


def test_unknown_flag_exits_2(maxwell_cfg, capsys):
    rc = main(["sweep", "--config", str(maxwell_cfg), "--T", "1.0",
               "--frobnicate", "yes"])
    assert rc == 2


def test_usage_error_without_subcommand(capsys):
    assert main([]) == 2
