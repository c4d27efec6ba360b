import json
from pathlib import Path

import pytest

from cycdesign import zoo
from cycdesign.cli import graph_from_obj, graph_to_json, main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_virtual_edge_example(capsys):
    code, out, _ = run(capsys, "check", "--graph", str(DATA / "virtual_edge.json"), "--flavor", "d",
                       "--x", "Y", "--y", "X2", "--cond", "X1,X4")
    assert code == 0 and out.strip() == "separated"
    code, out, _ = run(capsys, "check", "--graph", str(DATA / "virtual_edge.json"), "--flavor", "sigma",
                       "--x", "Y", "--y", "X2", "--cond", "X1,X4")
    assert out.strip() == "connected"


def test_design_lifted_running_example(capsys):
    code, out, _ = run(capsys, "design", "--graph", str(DATA / "running_example.json"), "--mode", "lifted")
    sets = {frozenset(s) for s in json.loads(out)["sets"]}
    assert code == 0 and len(sets) == 4
    assert frozenset({"X2", "X3", "X4", "Y2", "Y3", "Y4", "Z2", "Z3", "Z4"}) in sets


@pytest.mark.parametrize("mode", ["colored", "nm", "bounded-lifted"])
def test_design_other_modes(capsys, mode, tmp_path):
    out_path = tmp_path / "fam.json"
    code, _, _ = run(capsys, "design", "--graph", str(DATA / "running_example.json"), "--mode", mode,
                     "--max-size", "3", "--out", str(out_path))
    assert code == 0
    sets = json.loads(out_path.read_text())["sets"]
    if mode != "colored":
        assert max(len(s) for s in sets) <= 3


def test_learn_reports_exact_recovery(capsys, tmp_path):
    out_path = tmp_path / "learned.json"
    code, out, _ = run(capsys, "learn", "--graph", str(DATA / "running_example.json"),
                       "--skeleton", "oracle", "--flavor", "d", "--out", str(out_path))
    assert code == 0
    fields = dict(kv.split("=") for kv in out.split())
    assert fields["shd"] == "0" and int(fields["experiments"]) <= 8
    assert out_path.read_text() == (DATA / "running_example.json").read_text()


def test_learn_from_scm_is_reproducible(capsys, tmp_path):
    scm_path = tmp_path / "scm.json"
    data_path = tmp_path / "data.csv"
    assert run(capsys, "simulate", "--graph", str(DATA / "feedback_loop.json"), "--samples", "5",
               "--seed", "4", "--out", str(data_path), "--scm-out", str(scm_path))[0] == 0
    first = run(capsys, "learn", "--scm", str(scm_path), "--samples", "3000", "--seed", "2", "--skeleton", "pc")
    second = run(capsys, "learn", "--scm", str(scm_path), "--samples", "3000", "--seed", "2", "--skeleton", "pc")
    assert first[0] == 0 and first[1] == second[1]
    assert "f1=" in first[1]


def test_simulate_header_and_determinism(capsys):
    a = run(capsys, "simulate", "--graph", str(DATA / "feedback_loop.json"), "--do", "X4",
            "--samples", "4", "--seed", "7")
    b = run(capsys, "simulate", "--graph", str(DATA / "feedback_loop.json"), "--do", "X4",
            "--samples", "4", "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]
    lines = a[1].splitlines()
    assert lines[0] == "X1,X2,X3,X4" and len(lines) == 5


def test_bench_writes_csv_and_svg(capsys, tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"n": 8, "b": [2, 4], "p": 0.3}))
    out = tmp_path / "res.csv"
    code, stdout, _ = run(capsys, "bench", "--grid", str(grid), "--trials", "2", "--seed", "1",
                          "--out", str(out), "--svg", str(tmp_path / "plots"), "--quiet")
    assert code == 0 and stdout == ""
    assert out.read_text().splitlines()[0].startswith("seed,n,p,b,flavor,mode,m,samples")
    assert len(out.read_text().splitlines()) == 5
    assert (tmp_path / "plots" / "f1.svg").exists()


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "learn", "--graph")
    assert code == 2 and "usage error" in err
    code, _, err = run(capsys, "check", "--graph", str(tmp_path / "missing.json"), "--x", "0", "--y", "1")
    assert code == 2
    code, _, err = run(capsys, "learn", "--graph", str(DATA / "running_example.json"), "--max-size", "2")
    assert code == 1 and err.count("\n") == 1 and "Traceback" not in err
    code, _, err = run(capsys, "check", "--graph", str(DATA / "virtual_edge.json"), "--x", "Q", "--y", "X1")
    assert code == 2
    code, _, _ = run(capsys)
    assert code == 2


def test_verbose_shows_traceback(capsys):
    code, _, err = run(capsys, "learn", "--graph", str(DATA / "running_example.json"), "--max-size", "2", "--verbose")
    assert code == 1 and "Traceback" in err


def test_graph_json_roundtrip():
    for path in DATA.glob("*.json"):
        text = path.read_text()
        assert graph_to_json(graph_from_obj(json.loads(text))) == text
    g = zoo.three_cycles()
    scrambled = json.loads(graph_to_json(g))
    scrambled["edges"].reverse()
    assert graph_to_json(graph_from_obj(scrambled)) == graph_to_json(g)


def test_named_edges_accepted():
    g = graph_from_obj({"names": ["a", "b"], "edges": [["a", "b"]]})
    assert g.edges == {(0, 1)} and g.n == 2
