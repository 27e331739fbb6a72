import json

import numpy as np
import pytest

from steerlab.cli import main
from steerlab.states import GenerationConfig, gen_pairwise_entangled, haar_unitary, pqt_state


def _files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_verify_exit_zero(capsys):
    assert main(["verify"]) == 0
    assert "checks passed" in capsys.readouterr().out


def test_trials_deterministic(tmp_path):
    args = ["trials", "--states", "10", "--unitaries", "5", "--seed", "7"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    assert _files(tmp_path / "a") == _files(tmp_path / "b")
    header = (tmp_path / "a" / "trials.csv").read_text().splitlines()[0]
    assert header == "trial_id,seed,c_rs,c_re,c_se,cmi,nu_max,b_neg,status"


@pytest.mark.parametrize("argv", [["scan", "--step", "0.5"], ["scan", "--step", "0"], ["trials", "--states", "0"],
                                  ["bogus"], ["scan", "--format", "xml"]])
def test_usage_errors(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path)] if argv[0] != "bogus" else argv) == 2


def test_scan_json_svg(tmp_path):
    out = tmp_path / "s"
    assert main(["scan", "--step", "0.25", "--omega-grid", "8", "--format", "json", "--svg", "--out", str(out)]) == 0
    data = json.loads((out / "scan.json").read_text())
    assert len(data) == 9**3
    assert (out / "scan_cmi_nu.svg").exists()
    assert json.loads((out / "manifest.json").read_text())["config"] == {"step": 0.25, "omega_grid": 8}


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"step": 0.25, "omega_grid": 4}))
    out = tmp_path / "o"
    assert main(["scan", "--config", str(cfg), "--omega-grid", "8", "--out", str(out)]) == 0
    assert json.loads((out / "manifest.json").read_text())["config"] == {"step": 0.25, "omega_grid": 8}
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert main(["scan", "--config", str(cfg), "--out", str(out)]) == 2


def test_demo_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["demo", "--seed", "4", "--svg", "--out", str(tmp_path / d)]) == 0
    assert _files(tmp_path / "a") == _files(tmp_path / "b")


def test_steer_and_tomography(tmp_path):
    rho, _ = gen_pairwise_entangled(GenerationConfig(seed=1))
    state = tmp_path / "state.json"
    state.write_text(json.dumps(rho.to_dict()))
    u = haar_unitary(4, np.random.default_rng(0))
    ufile = tmp_path / "u.json"
    ufile.write_text(json.dumps([[[z.real, z.imag] for z in row] for row in u]))

    assert main(["steer", "--state", str(state), "--out", str(tmp_path / "st")]) == 0
    steer = json.loads((tmp_path / "st" / "steer.json").read_text())
    assert steer["domain_rank"] == 3 and len(steer["samples"]) == 200

    assert main(["tomography", "--state", str(state), "--omega", "2", "--out", str(tmp_path / "t1")]) == 0
    assert json.loads((tmp_path / "t1" / "map.json").read_text())["status"] == "OK"
    assert main(["tomography", "--state", str(state), "--unitary", str(ufile), "--out", str(tmp_path / "t2")]) == 0

    pqt = tmp_path / "pqt.json"
    pqt.write_text(json.dumps(pqt_state(0.2, 0.2, 0.2).to_dict()))
    assert main(["tomography", "--state", str(pqt), "--omega", "1", "--out", str(tmp_path / "t3")]) == 0
    assert json.loads((tmp_path / "t3" / "map.json").read_text())["status"] == "DEGENERATE_DOMAIN"
    assert main(["tomography", "--state", str(pqt), "--omega", "1", "--extend", "--out", str(tmp_path / "t4")]) == 0


def test_bad_inputs(tmp_path):
    assert main(["steer", "--state", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dims": [2], "entries": [[1, 0], [0, 0], [0, 0], [-1, 0]]}))
    assert main(["steer", "--state", str(bad), "--out", str(tmp_path)]) == 2
    u = tmp_path / "u.json"
    u.write_text(json.dumps([[[2.0, 0.0]] * 4] * 4))
    ok = tmp_path / "ok.json"
    ok.write_text(json.dumps(pqt_state(0, 0, 0).to_dict()))
    assert main(["tomography", "--state", str(ok), "--unitary", str(u), "--out", str(tmp_path)]) == 2


def test_generation_exhaustion_exit_one(tmp_path):
    assert main(["demo", "--min-concurrence", "0.99", "--max-attempts", "2", "--out", str(tmp_path)]) == 1
