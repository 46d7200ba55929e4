import json

import pytest

from netsynth.cli import EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_SOFT, main
from netsynth.graph import Graph, avg_shortest_path, complete_graph, path_graph
from netsynth.io import read_assignment, read_edge_list, read_tsv, write_edge_list

SMALL = ["--n", "60", "--e", "120", "--x-min", "2", "--c", "4.0"]


def test_generate_writes_consistent_outputs(tmp_path, capsys):
    code = main(["generate", *SMALL, "--seed", "1", "--out-dir", str(tmp_path), "--prefix", "g"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "gamma'=" in out and "y=4.0000" in out
    g = read_edge_list(tmp_path / "g.edges")
    report = json.loads((tmp_path / "g.report.json").read_text())
    assert report["y"] == avg_shortest_path(g)
    assert report["y_verified"] is True
    assert report["objectives"]["f1"] == 240
    assert report["meta"]["seed"] == 1
    header, rows = read_tsv(tmp_path / "g.trace.tsv")
    assert header[0] == "iteration" and len(rows) == report["extra"]["accepted"] + 1
    assert float(rows[-1][6]) == pytest.approx(report["y"], abs=1e-12)


def test_generate_is_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["generate", *SMALL, "--seed", "3", "--out-dir", str(tmp_path / d)]) == EXIT_OK
    a = (tmp_path / "a" / "net.edges").read_bytes()
    assert a == (tmp_path / "b" / "net.edges").read_bytes()
    assert (tmp_path / "a" / "net.trace.tsv").read_bytes() == (tmp_path / "b" / "net.trace.tsv").read_bytes()


def test_generate_community(tmp_path):
    code = main(["generate", *SMALL, "--c", "4.5", "--k", "2", "--out-dir", str(tmp_path)])
    assert code == EXIT_OK
    labels = read_assignment(tmp_path / "net.communities", 60)
    assert sorted(set(labels)) == [0, 1]
    report = json.loads((tmp_path / "net.report.json").read_text())
    assert "modularity" in report["extra"]


def test_generate_exit_codes(tmp_path, capsys):
    assert main(["generate", "--n", "300", "--e", "100", "--out-dir", str(tmp_path)]) == EXIT_INFEASIBLE
    assert main(["generate", "--acceptance", "nope", "--out-dir", str(tmp_path)]) == EXIT_CONFIG
    assert main(["generate", *SMALL, "--c", "9.0", "--max-iters", "50", "--out-dir", str(tmp_path)]) == EXIT_SOFT
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nodes = 5\n")
    assert main(["generate", "--config", str(cfg)]) == EXIT_CONFIG
    assert main(["generate", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO
    capsys.readouterr()


def test_print_config(capsys):
    assert main(["generate", "--print-config", "--c", "5.5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "c = 5.5" in out and "max_iters = 5000000" in out and "rule = strict" in out


def test_analyze_complete_and_chain(tmp_path, capsys):
    write_edge_list(complete_graph(20), tmp_path / "k20.edges")
    write_edge_list(path_graph(300), tmp_path / "p.edges")
    assert main(["analyze", str(tmp_path / "k20.edges"), "--out-dir", str(tmp_path)]) == EXIT_OK
    assert json.loads((tmp_path / "k20.report.json").read_text())["classification"]["label"] == "complete"
    assert main(["analyze", str(tmp_path / "p.edges"), "--out-dir", str(tmp_path)]) == EXIT_OK
    rep = json.loads((tmp_path / "p.report.json").read_text())
    assert rep["classification"]["label"] == "linear_regular"
    assert abs(rep["box"]["d_b"] - 1.0) <= 0.15
    header, rows = read_tsv(tmp_path / "p.box.tsv")
    assert header == ["l_b", "n_b"] and rows[0] == ["1", "300"]
    header, rows = read_tsv(tmp_path / "p.hist.tsv")
    assert header == ["degree", "count", "pdf"] and rows[0][:2] == ["1", "2"]
    capsys.readouterr()


def test_analyze_errors(tmp_path, capsys):
    write_edge_list(Graph(4, [(0, 1), (2, 3)]), tmp_path / "split.edges")
    assert main(["analyze", str(tmp_path / "split.edges"), "--out-dir", str(tmp_path)]) == EXIT_INFEASIBLE
    (tmp_path / "bad.edges").write_text("0 1\n2 2\n")
    assert main(["analyze", str(tmp_path / "bad.edges")]) == EXIT_IO
    assert "line 2" in capsys.readouterr().err


def test_sweep_front(tmp_path, capsys):
    code = main(["sweep", "--n", "30", "--x-min", "1", "--c", "2.5", "--e-grid", "40,60,80",
                 "--out-dir", str(tmp_path), "--prefix", "s"])
    assert code == EXIT_OK
    header, rows = read_tsv(tmp_path / "s.front.tsv")
    assert header == ["e", "f1", "f2", "y"] and len(rows) == 3
    for e, f1, f2, y in rows:
        assert int(f1) == 2 * int(e)
        assert (tmp_path / f"s_e{e}.edges").exists()
    f2s = [float(r[2]) for r in rows]
    assert f2s == sorted(f2s)
    assert main(["sweep", "--n", "30", "--e-grid", "5,40", "--out-dir", str(tmp_path)]) == EXIT_INFEASIBLE
    assert main(["sweep", "--e-grid", "a,b"]) == EXIT_CONFIG
    capsys.readouterr()


def test_reproduce_table1_tiny_budget(capsys):
    code = main(["reproduce-table1", "--rows", "c", "--max-iters", "20"])
    out = capsys.readouterr().out
    assert code == EXIT_SOFT
    assert "FAIL" in out and "0/1 rows" in out


def test_reproduce_table1_row_a(tmp_path, capsys):
    code = main(["reproduce-table1", "--rows", "a", "--out-dir", str(tmp_path)])
    out = capsys.readouterr().out
    line = [ln for ln in out.splitlines() if ln.startswith("a ")][0]
    gamma, y = float(line.split()[5]), float(line.split()[7])
    assert 1.80 <= gamma <= 2.40 and 3.85 <= y <= 3.95
    assert code == EXIT_OK
    assert (tmp_path / "table1_a_0.edges").exists()


def test_reproduce_table1_unknown_row(capsys):
    assert main(["reproduce-table1", "--rows", "z"]) == EXIT_CONFIG
    capsys.readouterr()
