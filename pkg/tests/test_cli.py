import io
import json
import subprocess
import sys

import pytest

from graphring.cli import main
from conftest import data_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_homology_triangle(capsys):
    doc = run_json(capsys, "homology", data_path("triangle.graph"))
    assert doc["rank"] == 8
    assert doc["rank_parts"] == {"b": 1, "r": 1, "2g_plus": 4, "g_minus": 2}
    assert doc["generators"][-1] == "t_R"
    assert doc["surfaces"][0]["multiplicities"] == {"Q": -4, "R": 2}


def test_ring_table(capsys):
    code, out, _ = run(capsys, "--format", "table", "ring", data_path("triangle.graph"))
    assert code == 0
    assert "form: -2 A1^B1^F + A2^B2^F" in out
    rows = {line.split("|")[0].strip(): line.split("|")[1].split() for line in out.splitlines() if "|" in line}
    assert rows["B1"][0] == "2t_R" and rows["F"][0] == "-2beta1"
    # the flag is also accepted after the subcommand
    assert run(capsys, "ring", "--format", "table", data_path("triangle.graph"))[1] == out


def test_ring_json(capsys):
    doc = run_json(capsys, "ring", data_path("chain.graph"))
    assert doc["basis"] == ["A1", "B1", "A2", "B2", "A3", "B3", "F"]
    assert [0, 1, "2t_R"] in doc["table"]


def test_consum_chain(capsys):
    doc = run_json(capsys, "consum", data_path("chain.graph"))
    assert doc["matches"] is True
    assert doc["presentation"]["epsilon"] == {"P": ["1/2"], "Q": ["-1"], "R": ["1"]}
    code, out, _ = run(capsys, "--format", "table", "consum", data_path("chain.graph"))
    assert code == 0 and "match: yes" in out and "eps_P: P -> 1/2 F" in out


def test_consum_rejects_cycle(capsys):
    code, out, err = run(capsys, "consum", data_path("triangle.graph"))
    assert code == 1 and out == ""
    assert "graph has a cycle" in err


def test_analyze_forms(capsys):
    doc = run_json(capsys, "analyze-form", data_path("obstruction_form.json"))
    assert doc["obstructed"] is True and doc["q"] == "0"
    doc = run_json(capsys, "analyze-form", data_path("split_form.json"))
    assert doc["rank3_verdict"] == "splits" and doc["q"] == "1"
    assert [t["labels"] for t in doc["witness"]] == [list("uvwxyz")] * 2


def test_analyze_zero_form_and_letters(capsys, tmp_path, monkeypatch):
    zero = tmp_path / "zero.json"
    zero.write_text('{"dim": 6, "terms": []}')
    doc = run_json(capsys, "analyze-form", zero)
    assert doc["radical_dim"] == 6 and doc["rank3_verdict"] == "not-applicable"
    monkeypatch.setattr(sys, "stdin", io.StringIO("abc+def"))
    doc = run_json(capsys, "analyze-form", "-")
    assert doc["rank3_verdict"] == "splits"


def test_obstruct(capsys, tmp_path):
    doc = run_json(capsys, "obstruct", data_path("chain.graph"))
    assert doc["obstructed"] is False and doc["form"]["dim"] == 7
    doc = run_json(capsys, "obstruct", "--form", data_path("obstruction_form.json"))
    assert doc["obstructed"] is True


GOLDEN_SEED_0 = {
    "nodes": [
        {"id": "N1", "genus": 2, "fibers": [[-5, 3]]},
        {"id": "N2", "genus": 1, "fibers": [[2, 3]]},
        {"id": "N3", "genus": 2, "fibers": []},
        {"id": "N4", "genus": 2, "fibers": []},
    ],
    "edges": [
        {"ends": ["N1", "N2"], "sign": -1},
        {"ends": ["N1", "N3"], "sign": 1},
        {"ends": ["N3", "N4"], "sign": -1},
    ],
}


def test_random_tree_determinism(capsys, monkeypatch):
    monkeypatch.delenv("GRAPHRING_SEED", raising=False)
    assert run_json(capsys, "random-tree", "--seed", 0) == GOLDEN_SEED_0
    a = run_json(capsys, "random-tree", "--seed", 7)
    assert run_json(capsys, "random-tree", "--seed", 7) == a
    monkeypatch.setenv("GRAPHRING_SEED", "0")
    assert run_json(capsys, "random-tree", "--seed", 7) == GOLDEN_SEED_0
    monkeypatch.setenv("GRAPHRING_SEED", "zero")
    assert run(capsys, "random-tree")[0] == 2


def test_random_tree_with_rank(capsys, monkeypatch):
    monkeypatch.delenv("GRAPHRING_SEED", raising=False)
    code, out, _ = run(capsys, "random-tree", "--seed", 3, "--rank", 6)
    assert code == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO(out))
    assert run_json(capsys, "homology", "-")["rank"] == 6


@pytest.mark.parametrize("text", ["node A genus x\n", "node A\nbogus\n", '{"nodes": ['])
def test_malformed_input_exit_2(capsys, monkeypatch, text):
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code, out, err = run(capsys, "homology", "-")
    assert code == 2 and out == "" and "parse error" in err


def test_invalid_graph_exit_1(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("node A\nnode A\n"))
    assert run(capsys, "homology", "-")[0] == 1
    assert run(capsys, "homology", "/nonexistent/graph")[0] == 1


def test_bad_form_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 6, "terms": [[0, 0, 1, "1"]]}')
    assert run(capsys, "analyze-form", bad)[0] == 2
    bad.write_text("not a form !")
    assert run(capsys, "analyze-form", bad)[0] == 2


def test_normalize(capsys):
    doc = run_json(capsys, "normalize", data_path("self_loop.graph"))
    labels = [n["id"] for n in doc["graph"]["nodes"]]
    assert labels[:2] == ["A", "B"] and len(labels) == 4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "graphring.cli", "homology", str(data_path("two_node.graph"))],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["rank"] == 1
