import json
import sys
from pathlib import Path

import numpy as np
import pytest

from eulerint.cli import main

PROBLEMS = Path(__file__).resolve().parents[1] / "problems"


def run(capsys, argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


# -- happy paths over the shipped problem files ----------------------------

def test_chi_lines(capsys):
    code, out = run(capsys, ["chi", PROBLEMS / "lines.json", "--seed", "1"])
    assert code == 0
    assert out["chi"] == 2
    assert out["count"] == 2
    assert out["certified"] is True


def test_chi_hexagon(capsys):
    code, out = run(capsys, ["chi", PROBLEMS / "hexagon.json"])
    assert code == 0
    assert (out["chi"], out["count"]) == (6, 6)


def test_vol_hexagon(capsys):
    code, out = run(capsys, ["vol", PROBLEMS / "hexagon.json"])
    assert code == 0
    assert out["normalized_volume"] == 6
    assert out["affine_dim"] == 2


def test_integrate_reference(capsys):
    code, out = run(capsys, ["integrate", PROBLEMS / "two_points.json"])
    assert code == 0
    def as_complex(v):
        return complex(*v) if isinstance(v, list) else complex(v)

    M = np.array([[as_complex(v) for v in row] for row in out["matrix"]])
    ref = np.array([[-3.496j, 4.144j, -0.648j], [3.496, 0.648, -4.144]])
    assert np.max(np.abs(M - ref)) < 5e-3
    assert max(out["closure_residuals"]) < 1e-6
    kernel = out["kernel"]
    assert len(kernel) == 1


def test_relations_operator_problem(capsys):
    code, out = run(capsys, ["relations", PROBLEMS / "quadratic_operator.json"])
    assert code == 0
    assert out["relations"]
    assert out["relations"][0]["source"] == "operator"
    for entry in out["residuals"]:
        assert all(r < 1e-3 for r in entry["residuals"])


def test_gkz_hexagon(capsys):
    code, out = run(capsys, ["gkz", PROBLEMS / "hexagon.json"])
    assert code == 0
    assert out["matrix"] == [[1, 1, 2, 2, 3, 3], [2, 3, 1, 3, 1, 2],
                             [1, 1, 1, 1, 1, 1]]
    assert out["rank_bound"] == 6
    assert len(out["kernel_basis"]) == 3
    assert len(out["operators"]["euler"]) == 3


# -- determinism and IO plumbing -------------------------------------------

def test_chi_deterministic_for_fixed_seed(capsys):
    _, a = run(capsys, ["chi", PROBLEMS / "hexagon.json", "--seed", "7"])
    _, b = run(capsys, ["chi", PROBLEMS / "hexagon.json", "--seed", "7"])
    assert a == b


def test_stdin_input(capsys, monkeypatch):
    payload = (PROBLEMS / "hexagon.json").read_text()
    monkeypatch.setattr(sys, "stdin", __import__("io").StringIO(payload))
    code, out = run(capsys, ["vol", "-"])
    assert code == 0
    assert out["normalized_volume"] == 6


def test_out_file(tmp_path, capsys):
    target = tmp_path / "result.json"
    code = main(["vol", str(PROBLEMS / "hexagon.json"), "--out", str(target)])
    assert code == 0
    assert json.loads(target.read_text())["normalized_volume"] == 6


# -- error handling --------------------------------------------------------

def test_missing_file_exit_3(capsys):
    code, out = run(capsys, ["chi", PROBLEMS / "no_such_file.json"])
    assert code == 3
    assert out["error"]["type"] == "invalid-input"


def test_invalid_json_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run(capsys, ["chi", bad])
    assert code == 3


def test_bad_polynomial_exit_3(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"f": ["x +* 1"], "s": [1], "nu": [1]}))
    code, out = run(capsys, ["chi", bad])
    assert code == 3


def test_non_annihilating_operator_exit_3(tmp_path, capsys):
    obj = json.loads((PROBLEMS / "quadratic_operator.json").read_text())
    obj["operators"][0]["q"] = "x"
    bad = tmp_path / "bad_op.json"
    bad.write_text(json.dumps(obj))
    code, out = run(capsys, ["relations", bad])
    assert code == 3


def test_open_cycle_exit_2(tmp_path, capsys):
    # a triangle around only one half-integer branch point cannot close
    obj = json.loads((PROBLEMS / "two_points.json").read_text())
    obj["cycles"] = [{"A": [0.7, 0.3], "B": [0.7, -0.3], "C": [1.4, 0.0],
                      "phi": "principal"}]
    bad = tmp_path / "open.json"
    bad.write_text(json.dumps(obj))
    code, out = run(capsys, ["integrate", bad])
    assert code == 2
    assert out["error"]["type"] == "numerical-failure"


def test_integrate_multivariate_exit_2(tmp_path, capsys):
    obj = json.loads((PROBLEMS / "hexagon.json").read_text())
    obj["cycles"] = [{"A": [0.5, 1.0], "B": [0.5, -1.0], "C": [3.0, 0.0],
                      "phi": "principal"}]
    obj["cocycles"] = [{"a": [0], "b": 0}]
    bad = tmp_path / "multi.json"
    bad.write_text(json.dumps(obj))
    code, out = run(capsys, ["integrate", bad])
    assert code == 2
