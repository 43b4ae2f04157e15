import json
import subprocess
import sys

import pytest

from tropmat.cli import main


def run(*argv):
    return subprocess.run([sys.executable, "-m", "tropmat", *argv], capture_output=True, text=True)


def test_realize_k3_matrix(tmp_path, capsys):
    m = tmp_path / "v.json"
    m.write_text(json.dumps([[0, 3, 3], [3, 0, 3], [3, 3, 0]]))
    assert main(["realize", "--matrix", str(m)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["vertices"]) == 6 and doc["maximal"]


def test_realize_k4_generic(capsys):
    assert main(["realize", "--k", "4", "--seed", "0"]) == 0
    assert len(json.loads(capsys.readouterr().out)["vertices"]) == 20


def test_realize_singular(tmp_path, capsys):
    m = tmp_path / "s.csv"
    m.write_text("1,1,1\n1,1,1\n1,1,1\n")
    assert main(["realize", "--matrix", str(m)]) == 2
    assert "error" in capsys.readouterr().err.lower()


def test_missing_input(capsys):
    assert main(["realize"]) == 2
    assert main(["realize", "--matrix", "/nonexistent.json"]) == 2


def test_subdivide_k3(capsys):
    assert main(["subdivide", "--k", "3", "--blocks", "2,2,2", "--samples", "100"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] and doc["cells"] == 6 and doc["duality"]["ok"]


def test_subdivide_k4(capsys):
    assert main(["subdivide", "--k", "4", "--samples", "100"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["cells"] == 20 and len(doc["dual_graph"]["edges"]) == 30


def test_subdivide_from_type_json(tmp_path, capsys):
    assert main(["realize", "--k", "3", "--out", str(tmp_path / "t.json")]) == 0
    assert main(["subdivide", "--matrix", str(tmp_path / "t.json"), "--samples", "50", "--format", "dot"]) == 0
    assert capsys.readouterr().out.startswith("graph")


def test_subdivide_bad_blocks(capsys):
    assert main(["subdivide", "--k", "4", "--blocks", "1,2,2,2"]) == 2
    assert main(["subdivide", "--k", "4", "--blocks", "2,2,2"]) == 2
    assert main(["subdivide", "--k", "4", "--blocks", "2,x"]) == 2


def test_rank4_demo(tmp_path):
    out = tmp_path / "demo.json"
    assert main(["rank4-demo", "--samples", "50", "--scan-max-n", "6", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["tilde"]["cells"]) == 14
    assert len(doc["splits"]) == 12
    assert doc["refinement"]["ok"]
    assert doc["quotient"]["support_f_vector"] == [6, 12, 8, 1]
    assert doc["splits_lemma_scan"]["violations"] == 0


@pytest.mark.parametrize("argv", [
    ["realize", "--k", "4", "--seed", "3"],
    ["subdivide", "--k", "3", "--samples", "40", "--seed", "2"],
])
def test_byte_identical(argv):
    a, b = run(*argv), run(*argv)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
