# Copyright 2025-2026 AstroLab Software
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import json

import numpy as np
import pandas as pd
import pytest

from braidfield.braid import parse_braid_word
from braidfield.cli import main
from braidfield.project import gauss_linking_number
from braidfield.semiholo import SemiholoPoly


@pytest.fixture
def torus_file(tmp_path):
    path = tmp_path / "torus.json"
    f = SemiholoPoly({(2, 0, 0): 1.0, (0, 1, 0): -1.0}, braid=parse_braid_word("1"))
    path.write_text(json.dumps(f.to_json()))
    return str(path)


def test_info(capsys):
    assert main(["info", "--braid", "2 -1 2 1 1 1"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["permutation"] == [2, 0, 1]
    assert info["components"] == [[0, 2, 1]]
    assert info["beta"] == 2
    assert info["strictly_homogeneous"] is False
    assert info["c1"] == pytest.approx(2.4)
    assert info["c2"] == 33
    assert info["projection_degree_bound"] == 66


def test_info_with_repeats(capsys):
    assert main(["info", "--braid", "1", "--repeat", "3"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["braid"] == "1 1 1"
    assert info["permutation"] == [1, 0]


def test_braid_file(tmp_path, capsys):
    path = tmp_path / "word.txt"
    path.write_text("bAbaaa\n")
    assert main(["info", "--braid-file", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["length"] == 6


@pytest.mark.parametrize(
    "argv",
    [
        ["info", "--braid", "3 -1", "--strands", "3"],
        ["info", "--braid", "1 0"],
        ["info"],
        ["info", "--braid-file", "/nonexistent/word.txt"],
        ["info", "--braid", "1", "--tol", "0.5"],
    ],
)
def test_input_errors(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("input: ")


def test_build(tmp_path, capsys):
    out = tmp_path / "f.json"
    fdata = tmp_path / "fdata.csv"
    crossings = tmp_path / "crossings.csv"
    argv = ["build", "--braid", "1", "--out", str(out)]
    argv += ["--dump-fdata", str(fdata), "--dump-crossings", str(crossings)]
    assert main(argv) == 0
    data = json.loads(out.read_text())
    assert data["strands"] == 2
    assert data["braid"] == {"strands": 2, "word": [1]}
    monomials = {(e["u"], e["v"], e["vbar"]): e["re"] for e in data["monomials"]}
    assert monomials == pytest.approx(
        {(2, 0, 0): 1.0, (0, 0, 0): 0.375, (0, 0, 1): -0.0625, (0, 1, 0): -0.5625}
    )
    assert len(pd.read_csv(fdata)) == 2
    assert len(pd.read_csv(crossings)) == 1
    assert "degree 2" in capsys.readouterr().out


def test_build_is_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["build", "--braid", "1 1", "--out", str(first)]) == 0
    assert main(["build", "--braid", "1 1", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_verify(torus_file, tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", torus_file, "--out", str(out), "--samples", "128"]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert report["lam"] in (1.0, 0.5)
    assert report["permutation_match"] is True
    assert report["failed_stage"] is None


def test_fixed_lambda(torus_file, tmp_path, capsys):
    out = tmp_path / "report.json"
    argv = ["verify", torus_file, "--out", str(out), "--samples", "128"]
    assert main(argv + ["--lambda", "0.5"]) == 0
    assert json.loads(out.read_text())["lam"] == 0.5
    # |u| = 1 on the unit circle: lambda = 1 is not contained and is not halved
    assert main(argv + ["--lambda", "1"]) == 3
    assert capsys.readouterr().err.startswith("verification: ")
    report = json.loads(out.read_text())
    assert report["lam"] == 1.0
    assert report["failed_stage"] == "containment"


def test_verify_failure_writes_the_report(tmp_path, capsys):
    path = tmp_path / "square.json"
    path.write_text(json.dumps(SemiholoPoly({(2, 0, 0): 1.0}).to_json()))
    out = tmp_path / "report.json"
    assert main(["verify", str(path), "--out", str(out), "--samples", "64"]) == 3
    assert capsys.readouterr().err.startswith("verification: ")
    report = json.loads(out.read_text())
    assert report["passed"] is False
    assert report["failed_stage"] == "transversality"


def test_malformed_polynomial(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["project", str(path)]) == 2
    linear = {"u": 1, "v": 0, "vbar": 0, "re": 1, "im": 0}
    path.write_text(json.dumps({"strands": 2, "monomials": [linear]}))
    assert main(["project", str(path)]) == 2


def test_project(torus_file, tmp_path):
    out = tmp_path / "projected.json"
    assert main(["project", torus_file, "--out", str(out), "--samples", "128"]) == 0
    data = json.loads(out.read_text())
    assert data["degree"] <= data["degree_bound"] == 4
    assert all(e["im"] == 0 for e in data["F1"]["monomials"] + data["F2"]["monomials"])


def test_project_integerized(torus_file, tmp_path):
    out = tmp_path / "projected.json"
    argv = ["project", torus_file, "--integerize", "--out", str(out), "--samples", "128"]
    assert main(argv) == 0
    data = json.loads(out.read_text())
    assert data["scale"] in (1, 2)
    assert data["perturbation"] == pytest.approx(0.0, abs=1e-9)
    for e in data["F1"]["monomials"] + data["F2"]["monomials"]:
        assert e["re"] == round(e["re"])


@pytest.mark.parametrize(
    "space, columns",
    [
        ("s3", ["strand", "t", "r", "u_re", "u_im", "v_re", "v_im"]),
        ("r3", ["strand", "t", "x", "y", "z"]),
    ],
)
def test_trace(torus_file, tmp_path, space, columns):
    out = tmp_path / "trace.csv"
    argv = ["trace", torus_file, "--space", space, "--out", str(out), "--samples", "64"]
    assert main(argv) == 0
    df = pd.read_csv(out)
    assert list(df.columns) == columns
    assert len(df) == 128


def test_configuration_is_used(torus_file, capsys):
    configuration = {
        "TOL": 1e-9,
        "GRID": 64,
        "SAMPLES": 32,
        "LAMBDA": None,
        "SEED": 0,
        "REPEAT": 1,
        "THREADS": 1,
        "LOG_LEVEL": "WARNING",
        "INTEGERIZE_BOUND": 12,
    }
    assert main(["verify", torus_file], configuration=configuration) == 2
    assert "samples must be at least 64" in capsys.readouterr().err


def test_wrap_sees_every_stage(capsys):
    seen = []

    def wrap(func):
        seen.append(func.__name__)
        return func

    assert main(["build", "--braid", "1"], wrap=wrap) == 0
    assert seen == ["construct", "assemble"]
    captured = capsys.readouterr()
    assert json.loads(captured.out)["strands"] == 2
    assert "strands 2" in captured.err


def _strand_curves(df):
    return [g.sort_values("t")[["x", "y", "z"]].to_numpy() for _, g in df.groupby("strand")]


def _closing_order(curves):
    """Strand whose first sample follows the last sample of each strand"""
    starts = np.array([c[0] for c in curves])
    return [int(np.linalg.norm(starts - c[-1], axis=-1).argmin()) for c in curves]


@pytest.mark.slow
def test_trace_of_the_hopf_link(tmp_path):
    polynomial, out = tmp_path / "hopf.json", tmp_path / "hopf.csv"
    assert main(["build", "--braid", "1 1", "--out", str(polynomial)]) == 0
    argv = ["trace", str(polynomial), "--space", "r3", "--out", str(out), "--samples", "256"]
    assert main(argv) == 0
    curves = _strand_curves(pd.read_csv(out))
    assert len(curves) == 2
    assert _closing_order(curves) == [0, 1]
    assert abs(gauss_linking_number(*curves)) == pytest.approx(1.0, abs=0.05)


@pytest.mark.slow
def test_trace_of_five_two_is_one_closed_curve(tmp_path):
    polynomial, out = tmp_path / "52.json", tmp_path / "52.csv"
    assert main(["build", "--braid", "2 -1 2 1 1 1", "--out", str(polynomial)]) == 0
    assert main(["trace", str(polynomial), "--space", "r3", "--out", str(out)]) == 0
    curves = _strand_curves(pd.read_csv(out))
    assert len(curves) == 3
    order = _closing_order(curves)
    visited = [0]
    while order[visited[-1]] != 0:
        visited.append(order[visited[-1]])
    assert sorted(visited) == [0, 1, 2]
