import csv
import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from dynkincoh import classical
from dynkincoh.cli import main

SCHEMA = json.loads((resources.files("dynkincoh") / "report.schema.json").read_text())


@pytest.fixture
def run(tmp_path, capsys):
    def _run(*argv, fmt=None):
        args = ["--cache-dir", str(tmp_path / "cache")]
        if fmt:
            args += ["--format", fmt]
        code = main(args + list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err
    return _run


def _json(run, *argv):
    code, out, err = run(*argv, fmt="json")
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return code, data


def test_hd_h4(run):
    code, data = _json(run, "hd", "--type", "H4")
    assert code == 0
    assert data["degrees"][2:] == [2, 3, 4] and data["dims"][2:] == [3, 0, 16]


def test_hd_text(run):
    code, out, _ = run("hd", "--type", "F4")
    assert code == 0 and "3" in out and "5" in out


def test_hd_both_agrees(run):
    code, data = _json(run, "hd", "--type", "A", "--rank", "3", "--method", "both")
    assert code == 0 and data["dims"] == [0, 0, 1, 0] and data["agree"]


def test_hd_per_class(run):
    code, data = _json(run, "hd", "--type", "D4", "--per-class", "--method", "both")
    assert code == 0 and data["agree"]
    rows = {(r["class_label"], r["degree"]): r["dim"] for r in data["per_class"]}
    assert sum(v for (_, p), v in rows.items() if p == 4) == 2


def test_hd_cd_and_diagram_json(run):
    code, data = _json(run, "hd", "--type", "I2(7)", "--complex", "cd")
    assert code == 0 and data["dims"] == [0, 0, 3]
    code, data = _json(run, "hd", "--diagram", '{"vertices": [1, 2], "m": [[1, 5], [5, 1]]}')
    assert code == 0 and data["dims"] == [0, 0, 2]


def test_hd_mismatch_exit_code(run, monkeypatch):
    real = classical.hd_dims_closed_form

    def wrong(fam, n):
        out = dict(real(fam, n))
        out[2] = (out[2][0] + 1, out[2][1])
        return out

    monkeypatch.setattr(classical, "hd_dims_closed_form", wrong)
    code, _, err = run("hd", "--type", "A3", "--method", "both")
    assert code == 3 and err


def test_exit_codes(run):
    assert run("hd", "--type", "X9")[0] == 1
    assert run("hd")[0] == 1
    assert run("bogus")[0] == 1
    assert run("hd", "--type", "E6", "--method", "combinatorial")[0] == 1
    assert run("hd", "--type", "E7")[0] == 2
    assert run("--allow-large", "hd", "--type", "E8")[0] == 2
    assert run("--group-cap", "5000000", "hd", "--type", "E7")[0] == 2
    assert run("hd", "--type", "H4", "--complex", "cd")[0] == 2
    assert run("affine", "--type", "H3")[0] == 2
    assert run("affine", "--type", "Q2")[0] == 1
    assert run("genfun", "--family", "D")[0] == 1


def test_verify_table(run):
    code, data = _json(run, "verify", "--suite", "table")
    assert code == 0 and data["passed"]
    assert {c["name"] for c in data["checks"]} == {f"table {x}" for x in
                                                   ["G2", "F4", "H3", "H4", "E6"]}


def test_verify_quasi_iso(run):
    code, data = _json(run, "verify", "--suite", "quasi-iso")
    assert code == 0 and all(c["ok"] for c in data["checks"])


def test_verify_stabilisation_reports_first_failure(run):
    # the type B closed forms do not stabilise at p = m (see the decisions ledger)
    code, data = _json(run, "verify", "--suite", "stabilisation")
    assert code == 3 and not data["passed"]
    assert data["first_failure"] == "stabilisation B"


def test_genfun(run):
    code, data = _json(run, "genfun", "--family", "A", "--max-q", "5", "--max-t", "5")
    grid = data["coefficients"]
    assert code == 0 and grid[3][3] == 0 and grid[2][2] == 1
    code, data = _json(run, "genfun", "--family", "B", "--max-q", "4", "--max-t", "4")
    assert code == 0 and data["coefficients"][4][4] == 2
    assert all(data["engine_agrees"].values())
    code, data = _json(run, "genfun", "--family", "A", "--max-q", "1", "--max-t", "1")
    assert data["coefficients"] == [[0, 0], [0, 0]]


def test_affine(run):
    code, data = _json(run, "affine", "--type", "A1", "--height", "2")
    assert code == 0
    one = [r for r in data["representatives"] if r["rep"] == {"t": [1], "v_word": "e"}]
    assert one[0]["dims"] == {"0": 0, "1": 1, "2": 1}
    code, data = _json(run, "affine", "--type", "A2", "--height", "1")
    trans = [r for r in data["representatives"] if r["rep"] == {"t": [1, 0], "v_word": "e"}]
    assert trans[0]["dims"] == {"0": 0, "1": 1, "2": 2, "3": 1}
    code, data = _json(run, "affine", "--type", "A1", "--height", "0")
    assert all(not r["infinite_order"] and "triangle_sides" in r for r in data["representatives"])
    code, data = _json(run, "affine", "--type", "A2", "--height", "1", "--class", "0")
    assert len(data["representatives"]) == 1


def test_csv(run):
    code, out, _ = run("hd", "--type", "B3", "--per-class", fmt="csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["diagram", "degree", "dim", "class_label"]
    assert any(r[1] == "2" and r[2] != "0" for r in rows[1:])


def test_cache_round_trip(run):
    run("hd", "--type", "G2")
    code, data = _json(run, "cache", "info")
    assert code == 0 and len(data["entries"]) == 1
    code, out, _ = run("hd", "--type", "G2")
    assert "cache" in out
    code, data = _json(run, "cache", "clear")
    assert data["removed"] == 1
    assert _json(run, "cache", "info")[1]["entries"] == []


def test_json_is_deterministic(tmp_path):
    def once():
        cmd = [sys.executable, "-m", "dynkincoh", "--no-cache", "--format", "json",
               "hd", "--type", "B3", "--per-class"]
        return subprocess.run(cmd, capture_output=True, check=True).stdout

    assert once() == once()


def test_parallelism_gives_the_same_json(run):
    a = _json(run, "--no-cache", "hd", "--type", "F4", "--per-class")[1]
    b = _json(run, "--no-cache", "--parallelism", "2", "hd", "--type", "F4", "--per-class")[1]
    assert a == b
