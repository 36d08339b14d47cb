import io
import json

import pytest

from fatgraph import cli, reembed
from fatgraph.maps import bouquet, emit_rot, random_embedding
from fatgraph.reembed import GenusDistribution

from conftest import DATA

FIG1 = str(DATA / "fig1.rot")
FIG1_TXT = str(DATA / "fig1.txt")
DEG5 = str(DATA / "degree5_unicellular.txt")
TREE = str(DATA / "tree.rot")
K4 = str(DATA / "k4_planar.rot")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_faces_and_genus(capsys):
    code, rep = run_json(capsys, "faces", "-i", FIG1_TXT)
    assert code == 0
    assert rep["num_faces"] == 1 and rep["genus"] == 1
    assert rep["faces"] == [list(range(1, 9))]
    assert run(capsys, "genus", "-i", TREE)[1] == "0\n"
    assert run_json(capsys, "faces", "--input", K4)[1]["num_faces"] == 4
    code, out, _ = run(capsys, "faces", "-i", FIG1)
    assert out.startswith("V=3 E=4 F=1 genus=1")


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO((DATA / "fig1.rot").read_text()))
    assert run(capsys, "genus", "-i", "-")[1] == "1\n"


def test_dual(capsys):
    code, rep = run_json(capsys, "dual", "-i", FIG1)
    assert code == 0
    assert rep["num_vertices"] == 1 and rep["num_faces"] == 3 and rep["genus"] == 1
    assert run(capsys, "dual", "-i", FIG1)[1].startswith("halfedges 8\n")


def test_reembed_modes(capsys):
    code, rep = run_json(capsys, "reembed", "-i", FIG1, "-v", "v2", "--mode", "dist", "--oracle-check")
    assert code == 0
    assert rep["histogram"] == {"-1": "3", "0": "3"}
    assert rep["oracle_check"] == "agrees"
    assert run_json(capsys, "reembed", "-i", FIG1, "-v", "2", "--mode", "count")[1]["histogram"] == {"-1": "3", "0": "3"}
    assert run_json(capsys, "reembed", "-i", FIG1, "-v", "2", "--mode", "count", "--delta-g", "-1")[1]["count"] == "3"
    assert run_json(capsys, "reembed", "-i", FIG1, "-v", "2", "--mode", "count", "--eta", "4")[1]["count"] == "3"
    assert run_json(capsys, "reembed", "-i", DEG5, "-v", "8", "--mode", "prob")[1]["probability"] == "1/3"
    assert run(capsys, "reembed", "-i", FIG1, "-v", "2", "--mode", "range")[1] == "[-1, 0]\n"
    rep = run_json(capsys, "reembed", "-i", FIG1, "--mode", "range")[1]
    assert rep["interval"] == [0, 1] and rep["mode"] == "exact"


def test_reembed_enum_streams(capsys):
    code, out, _ = run(capsys, "reembed", "-i", FIG1, "-v", "v2", "--mode", "enum", "--format", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 6
    assert rows[0] == {"delta_g": -1, "theta": [2, 4, 6, 8]}
    text = run(capsys, "reembed", "-i", FIG1, "-v", "v2", "--mode", "enum")[1]
    assert "(2 6 4 8) 0" in text.splitlines()


def test_count(capsys):
    assert run(capsys, "count", "-k", "1", "-lambda", "5", "-n", "5")[1] == "8\n"
    code, rep = run_json(capsys, "count", "-k", "1", "--lambda", "1^3", "-n", "3", "--oracle-check", "--closed-form")
    assert code == 0
    assert rep == {"closed_form": "2", "count": "2", "k": 1, "lambda": "1 1 1", "n": 3, "oracle": "2"}
    assert run(capsys, "count", "--eta", "4", "-lambda", "3 1")[1] == "3\n"


@pytest.mark.parametrize("argv", [
    ["count", "-k", "1"],
    ["count", "-lambda", "3", "-n", "4", "-k", "1"],
    ["count", "-lambda", "3"],
    ["count", "-lambda", "3", "-k", "1", "--eta", "3"],
    ["count", "-lambda", "3", "-k", "3", "--closed-form"],
    ["count", "-lambda", "x", "-k", "1"],
    ["reembed", "-i", FIG1, "-v", "nope"],
    ["reembed", "-i", FIG1],
    ["reembed", "-v", "v1"],
    ["genus", "-i", "/nonexistent/file.rot"],
    ["experiment", "K4"],
    ["experiment", "Q7", "--exhaustive"],
    ["frobnicate"],
    ["genus", "-i", FIG1, "--jobs", "0"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("fatgraph: usage")
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 1
    assert json.loads(out)["error"]["code"] == 1


def test_parse_error_location(tmp_path, capsys):
    bad = tmp_path / "bad.rot"
    bad.write_text("halfedges 2\nedge 1 2\nvertex a: 1 x\n")
    code, rep = run_json(capsys, "genus", "-i", str(bad))
    assert code == 2
    assert rep["error"]["line"] == 3 and rep["error"]["column"] == 13
    code, out, err = run(capsys, "genus", "-i", str(bad))
    assert code == 2 and "line 3, column 13" in err


def test_disconnected_input(tmp_path, capsys):
    f = tmp_path / "two.rot"
    f.write_text("halfedges 4\nedge 1 2\nedge 3 4\nvertex a: 1 2\nvertex b: 3 4\n")
    assert run(capsys, "genus", "-i", str(f))[0] == 2


def test_budget_exit(tmp_path, capsys):
    f = tmp_path / "big.rot"
    f.write_text(emit_rot(random_embedding(bouquet(6), 0)))
    code, rep = run_json(capsys, "reembed", "-i", str(f), "-v", "o")
    assert code == 3
    assert "count" in rep["error"]["message"]
    code, rep = run_json(capsys, "reembed", "-i", str(f), "-v", "o", "--mode", "count")
    assert code == 0 and rep["total"] == "39916800"
    assert run(capsys, "count", "-k", "1", "-lambda", "10", "--oracle-check")[0] == 3


def test_invariant_exit(capsys, monkeypatch):
    monkeypatch.setattr(reembed, "count_distribution", lambda E, v: GenusDistribution("v2", {0: 6}))
    code, rep = run_json(capsys, "reembed", "-i", FIG1, "-v", "v2", "--oracle-check")
    assert code == 4
    assert rep["error"]["kind"] == "invariant"


def test_certify(capsys):
    code, rep = run_json(capsys, "certify", "-i", FIG1, "min")
    assert code == 0
    assert rep["violations"] == ["v2", "v3"] and not rep["passed"]
    assert rep["note"] == "necessary, not sufficient"
    assert run_json(capsys, "certify", "-i", FIG1, "max")[1]["passed"]
    assert run_json(capsys, "certify", "-i", K4, "min")[1]["passed"]
    out = run(capsys, "certify", "-i", K4, "max")[1]
    assert "necessary, not sufficient" in out and out.rstrip().endswith("FAIL: 1 2 3 4")


def test_experiment(capsys):
    code, rep = run_json(capsys, "experiment", "K4", "--exhaustive")
    assert code == 0
    assert rep["embeddings"] == 16
    assert sum(rep["genus_histogram"].values()) == 16
    assert rep["genus_range"] == [0, 1] and rep["estimated_range"] == [0, 1]
    rep = run_json(capsys, "experiment", "B2", "--exhaustive")[1]
    assert rep["genus_histogram"] == {"0": 4, "1": 2}
    a = run(capsys, "experiment", "K3,3", "--random", "--samples", "15", "--seed", "11", "--format", "json")[1]
    b = run(capsys, "experiment", "K3,3", "--random", "--samples", "15", "--seed", "11", "--format", "json")[1]
    assert a == b
    rep = json.loads(a)
    assert rep["embeddings"] == 15 and rep["seed"] == 11
    assert run_json(capsys, "experiment", FIG1, "--exhaustive")[1]["embeddings"] == 12


def test_experiment_budget(capsys):
    assert run(capsys, "experiment", "K6", "--exhaustive")[0] == 3
