import csv
import json

import numpy as np
import pytest

from szdisc import cli
from szdisc.acceptance import counterexample_disc, two_discs, unit_disc
from szdisc.discs import ClosedPolyDisc
from szdisc.glue import spec_from_base
from szdisc.serialize import disc_to_json, dump, geometry_to_json, spec_to_json


@pytest.fixture
def files(tmp_path):
    paths = {
        "unit": tmp_path / "unit.json",
        "two": tmp_path / "two.json",
        "disc": tmp_path / "disc.json",
        "spec": tmp_path / "spec.json",
    }
    dump(geometry_to_json(unit_disc()), paths["unit"])
    dump(geometry_to_json(two_discs()), paths["two"])
    dump(disc_to_json(counterexample_disc()), paths["disc"])
    dump(spec_to_json(spec_from_base(ClosedPolyDisc(([2.0, 1.5],)), two_discs(), m=32.0)), paths["spec"])
    return {k: str(v) for k, v in paths.items()}


def run(argv, tmp_path):
    out = tmp_path / "out.json"
    code = cli.main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text()) if out.exists() else None


@pytest.mark.parametrize("which,method,want", [("J", "exact", np.log(2)), ("I", "exact", 1 + np.log(2)), ("nu", "exact", 1.0)])
def test_functional(files, tmp_path, which, method, want):
    code, doc = run(["functional", "--disc", files["disc"], "--which", which, "--method", method], tmp_path)
    assert code == 0 and doc["schema"] == "sz/1"
    assert doc["value"] == pytest.approx(want, abs=1e-12)


def test_functional_quadrature(files, tmp_path):
    code, doc = run(["functional", "--disc", files["disc"], "--which", "I", "--method", "quadrature", "--grid-size", "65536"], tmp_path)
    assert doc["value"] == pytest.approx(1 + np.log(2), abs=5e-6)


def test_glue(files, tmp_path):
    code, doc = run(["glue", "--spec", files["spec"], "--set", files["two"], "--grid", "16384"], tmp_path)
    assert code == 0 and doc["valid"]
    assert doc["bound"] == pytest.approx(0.394674, abs=1e-5)


def test_envelope(files, tmp_path):
    code, doc = run(["envelope", "--set", files["unit"], "--point", "2,0", "--families", "ball"], tmp_path)
    assert code == 0 and doc["value"] == pytest.approx(np.log(2), abs=1e-3)
    assert doc["certificate"]["type"] == "disc"


def test_envelope_rejects_unknown_family(files, tmp_path):
    code, _ = run(["envelope", "--set", files["unit"], "--point", "2,0", "--families", "spline"], tmp_path)
    assert code == 2


def test_envelope_grid_matches_closed_form(files, tmp_path):
    out = tmp_path / "grid.csv"
    args = ["envelope-grid", "--set", files["unit"], "--grid=-3:3:7,-2:2:5", "--out", str(out)]
    assert cli.main(args) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["re", "im", "value", "family"] and len(rows) == 35
    for r in rows:
        z = complex(float(r["re"]), float(r["im"]))
        assert float(r["value"]) == pytest.approx(np.log(max(1.0, abs(z))), abs=1e-3)
    first = out.read_bytes()
    assert cli.main(args) == 0
    assert out.read_bytes() == first


def test_oracle_closed_and_poly(files, tmp_path):
    code, doc = run(["oracle", "--set", files["unit"], "--point", "4,0", "--method", "closed"], tmp_path)
    assert doc["value"] == pytest.approx(np.log(4))
    code, doc = run(["oracle", "--set", files["unit"], "--point", "2,0", "--method", "poly", "--degree", "1", "--budget", "2"], tmp_path)
    assert doc["value"] == pytest.approx(np.log(2), abs=1e-2) and doc["value"] <= np.log(2)


def test_oracle_pde(files, tmp_path):
    code, doc = run(["oracle", "--set", files["unit"], "--point", "2,0", "--method", "pde", "--grid", "250"], tmp_path)
    assert code == 0
    assert abs(doc["value"] - np.log(2)) <= doc["error_estimate"]


def test_hull(files, tmp_path):
    code, doc = run(["hull", "--compact", files["unit"], "--point", "3,0", "--schedule", "0.1"], tmp_path)
    assert code == 0 and doc["status"] == "not_in_hull"


@pytest.mark.parametrize(
    "argv",
    [
        ["envelope", "--set", "{unit}", "--point", "2"],
        ["envelope", "--set", "{unit}", "--point", "a,b"],
        ["envelope-grid", "--set", "{unit}", "--grid", "0:1"],
        ["hull", "--compact", "{unit}", "--point", "2,0", "--schedule", "0.1,-1"],
        ["functional", "--disc", "{disc}", "--grid-size", "1000"],
        ["envelope", "--set", "/nonexistent.json", "--point", "2,0"],
    ],
)
def test_bad_arguments_exit_2(files, tmp_path, argv):
    argv = [a.format(**files) for a in argv]
    assert cli.main(argv + ["--out", str(tmp_path / "x")]) == 2


def test_malformed_geometry_exit_2_with_field_path(tmp_path, capsys):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"schema": "sz/1", "primitives": [{"ball": {"center": [[0, 0]], "radius": "x"}}]}))
    assert cli.main(["envelope", "--set", str(p), "--point", "2,0"]) == 2
    assert "$.primitives[0].ball.radius" in capsys.readouterr().err


def test_run_config_validation():
    with pytest.raises(cli.UsageError):
        cli.RunConfig(N=1000)
    with pytest.raises(cli.UsageError):
        cli.Tolerances(quadrature=0.0)
    assert cli.RunConfig().N == 4096


def test_parse_point_dimensions():
    assert cli.parse_point("1,2,3,4", 2).tolist() == [1 + 2j, 3 + 4j]


def test_verify_paper_fixtures(capsys, tmp_path):
    code = cli.main(["verify", "--suite", "paper-fixtures", "--out", str(tmp_path / "v.json")])
    text = capsys.readouterr().out
    assert code == 0
    assert "criterion 1 [PASS] counterexample fixture" in text
    doc = json.loads((tmp_path / "v.json").read_text())
    assert [r["number"] for r in doc["results"]] == [1, 6, 7]
