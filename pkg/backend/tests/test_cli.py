import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from convex_rounder.config import Settings
from convex_rounder.main import main


def run(capsys, *argv):
    code = main([str(arg) for arg in argv])
    output = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(output[-1])


@pytest.fixture
def make_body(tmp_path, capsys):
    def make(preset, *extra):
        path = tmp_path / f"{preset}.json"
        code, _ = run(capsys, "body", "make", "--preset", preset, *extra, "--out", path)
        assert code == 0
        return path

    return make


def test_body_make_square(tmp_path, capsys):
    path = tmp_path / "square.json"
    code, result = run(capsys, "body", "make", "--preset", "square", "--out", path)
    assert code == 0
    assert result["schema_version"] == 1
    assert result["command"] == "body make"
    assert result["artifacts"] == [str(path)]
    assert result["payload"]["inradius"] == pytest.approx(1.0)
    assert result["payload"]["circumradius"] == pytest.approx(np.sqrt(2.0))
    document = json.loads(path.read_text())
    assert document["kind"] == "polytope"
    assert len(document["vertices"]) == 4


def test_body_make_is_reproducible(tmp_path, capsys):
    paths = [tmp_path / "first.json", tmp_path / "second.json"]
    for path in paths:
        code, _ = run(
            capsys, "--seed", 7, "body", "make", "--preset", "random-polytope", "--out", path
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_body_make_rejects_malformed_document(tmp_path, capsys):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps({"kind": "polytope", "dim": 2, "vertices": [[0.0, 0.0, 1.0]]}))
    out = tmp_path / "out.json"
    code, result = run(capsys, "body", "make", "--spec", spec, "--out", out)
    assert code == 2
    assert result["exit_code"] == 2
    assert result["payload"]["error"] == "SpecError"
    assert not out.exists()


def test_body_make_rejects_flat_polytope(tmp_path, capsys):
    spec = tmp_path / "flat.json"
    document = {"kind": "polytope", "dim": 2, "vertices": [[0, 0], [1, 1], [2, 2]]}
    spec.write_text(json.dumps(document))
    code, result = run(capsys, "body", "make", "--spec", spec, "--out", tmp_path / "out.json")
    assert code == 2
    assert result["payload"]["error"] == "DegeneracyError"


def test_missing_body_file(tmp_path, capsys):
    code, result = run(capsys, "cert", tmp_path / "nothing.json", "--kind", "strict")
    assert code == 2
    assert result["payload"]["error"] == "SpecError"


def test_round_ball(tmp_path, capsys, make_body):
    ball = make_body("ball")
    out_dir = tmp_path / "rounded"
    code, result = run(capsys, "round", ball, "--algorithm", "strictify", "--out-dir", out_dir)
    assert code == 0
    assert result["payload"]["hausdorff"] == pytest.approx(1 - 1 / np.sqrt(1.1))
    assert json.loads((out_dir / "rounded.json").read_text())["kind"] == "ball"
    assert json.loads((out_dir / "strict.json").read_text())["pass"] is True


def test_round_then_certify(tmp_path, capsys, make_body):
    square = make_body("square")
    out_dir = tmp_path / "rounded"
    code, result = run(
        capsys,
        "round",
        square,
        "--algorithm",
        "strictify",
        "--epsilon",
        0.5,
        "--out-dir",
        out_dir,
    )
    assert code == 0
    assert result["payload"]["constant"] > 0
    rounded = out_dir / "rounded.json"
    code, result = run(capsys, "cert", rounded, "--kind", "strict")
    assert code == 0
    assert result["payload"]["pass"] is True
    # strictification keeps the kinks on the diagonals
    report = tmp_path / "smooth.csv"
    code, result = run(capsys, "cert", rounded, "--kind", "smooth", "--out", report)
    assert code == 4
    assert result["payload"]["pass"] is False
    header, row = report.read_text().splitlines()
    assert header.startswith("kind,value,threshold,pass")
    assert row.startswith("smooth,")


@pytest.mark.slow
def test_round_square(tmp_path, capsys, make_body):
    square = make_body("square")
    out_dir = tmp_path / "rounded"
    code, result = run(capsys, "round", square, "--out-dir", out_dir)
    assert code == 0
    assert result["payload"]["converged"] is True
    assert result["payload"]["hausdorff"] < 0.1
    lines = (out_dir / "trace.csv").read_text().splitlines()
    assert lines[0] == "iter,gap,monotone_upper_ok,monotone_lower_ok,sandwich_ok"
    gaps = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(gaps, gaps[1:]))
    assert all(line.endswith("true,true,true") for line in lines[1:])


def test_dual_polar_and_fenchel(tmp_path, capsys, make_body):
    square = make_body("square")
    polar_path, energy_path = tmp_path / "polar.json", tmp_path / "energy.json"
    code, result = run(capsys, "dual", square, "--op", "polar", "--out", polar_path)
    assert code == 0
    document = json.loads(polar_path.read_text())
    vertices = {tuple(np.round(v, 12) + 0.0) for v in document["vertices"]}
    assert vertices == {(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)}
    code, result = run(capsys, "dual", square, "--op", "fenchel", "--out", energy_path)
    assert code == 0
    assert result["payload"]["kind"] == "SquaredGauge"
    assert json.loads(energy_path.read_text())["kind"] == "squared_gauge"


def test_dist_with_lipschitz_witnesses(capsys, make_body):
    square, ball = make_body("square"), make_body("ball")
    code, result = run(capsys, "dist", square, ball, "--lipschitz")
    assert code == 0
    payload = result["payload"]
    assert payload["hausdorff"] == pytest.approx(np.sqrt(2.0) - 1.0, abs=1e-9)
    assert payload["forward"]["holds"] is True
    assert payload["inverse"]["holds"] is True


def test_cert_cross_is_diagnostic(capsys, make_body):
    code, result = run(capsys, "cert", make_body("ball"), "--kind", "cross")
    assert code == 0
    assert result["payload"]["violation"] == 0.0


def test_export_svg(tmp_path, capsys, make_body):
    out = tmp_path / "bodies.svg"
    code, result = run(capsys, "export", make_body("square"), make_body("cross"), "--out", out)
    assert code == 0
    assert result["payload"]["bodies"] == 2
    root = ET.parse(out).getroot()
    assert root.tag.endswith("svg")


def test_export_rejects_spatial_bodies(tmp_path, capsys, make_body):
    out = tmp_path / "cube.svg"
    code, result = run(capsys, "export", make_body("cube"), "--out", out)
    assert code == 2
    assert result["payload"]["error"] == "DimensionError"
    assert not out.exists()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["--version"])
    assert exit_info.value.code == 0
    assert "convex-rounder" in capsys.readouterr().out


def test_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("CONVEX_ROUNDER_GRID_N", "360")
    monkeypatch.setenv("CONVEX_ROUNDER_FD_STEP", "1e-5")
    overridden = Settings()
    assert overridden.grid_n == 360
    assert overridden.fd_step == 1e-5
