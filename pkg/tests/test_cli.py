import json

import pytest

from indtrans.cli import main, parse_params, InputError
from indtrans.constructions import catlin
from indtrans.core import read_graph
from indtrans.matching import parse_adjacency


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_gen_random(workdir, capsys):
    assert main(["gen", "random", "5", "20", "--seed", "1", "--out", "g.knd1"]) == 0
    g = read_graph("g.knd1")
    assert (g.k, g.n) == (5, 20)
    assert "valid" in capsys.readouterr().out


def test_gen_catlin_and_clique(workdir):
    assert main(["gen", "catlin", "3", "--out", "c.knd1"]) == 0
    assert read_graph("c.knd1") == catlin(3)
    assert main(["gen", "clique", "4", "--out", "q.json", "--format", "json"]) == 0
    q = read_graph("q.json")
    assert (q.k, q.n, q.edge_count()) == (4, 3, 6)


def test_gen_latin_trap(workdir):
    assert main(["gen", "latin-trap", "4", "--out", "b.txt"]) == 0
    assert parse_adjacency((workdir / "b.txt").read_text()).m == 5
    assert main(["gen", "latin-trap", "4", "--full", "--out", "t.knd1"]) == 0
    assert read_graph("t.knd1").n == 5


def test_gen_bad_input(workdir):
    assert main(["gen", "random", "5"]) == 2
    assert main(["gen", "catlin", "2"]) == 2


def test_solve_greedy_success(workdir):
    main(["gen", "random", "3", "4", "--seed", "3", "--out", "g.knd1"])
    assert main(["solve", "g.knd1", "--algorithm", "greedy", "--out", "r.json"]) == 0
    res = json.loads((workdir / "r.json").read_text())
    assert res["status"] == "success" and len(res["factor"]) == 4
    assert set(res) >= {"status", "factor", "stage_reports", "params", "seed", "wall_time_ms"}


def test_solve_brute_no_factor(workdir):
    main(["gen", "catlin", "3", "--out", "c.knd1"])
    assert main(["solve", "c.knd1", "--algorithm", "brute", "--out", "r.json"]) == 0
    assert json.loads((workdir / "r.json").read_text())["status"] == "no-factor-exists"


def test_solve_brute_over_cap(workdir):
    main(["gen", "random", "3", "9", "--out", "g.knd1"])
    assert main(["solve", "g.knd1", "--algorithm", "brute"]) == 2


def test_solve_semirandom_failure_exit(workdir):
    main(["gen", "clique", "5", "--out", "q.knd1"])
    assert main(["solve", "q.knd1", "--params", "restarts=2", "--out", "r.json"]) == 1
    res = json.loads((workdir / "r.json").read_text())
    assert res["status"] == "failure" and res["attempts"] == 3
    assert res["stage_reports"][-1]["fallback_used"]


def test_solve_parse_error(workdir, capsys):
    (workdir / "bad.knd1").write_text("knd1 v1 k=2 n=2 base=0\npair 0 1: 0->1 0->0\n")
    assert main(["solve", "bad.knd1"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_solve_timing_flag(workdir):
    main(["gen", "random", "4", "8", "--out", "g.knd1"])
    main(["solve", "g.knd1", "--out", "a.json"])
    main(["solve", "g.knd1", "--timing", "--out", "b.json"])
    assert json.loads((workdir / "a.json").read_text())["wall_time_ms"] is None
    assert json.loads((workdir / "b.json").read_text())["wall_time_ms"] >= 0


def test_parse_params():
    p = parse_params("c=0.9,delta=0.05,restarts=3,clamp_retained=1", 5)
    assert (p.c, p.delta, p.restarts, p.clamp_retained, p.seed) == (0.9, 0.05, 3, True, 5)
    for bad in ("c=0.5", "gamma=1", "delta", "restarts=x"):
        with pytest.raises(InputError):
            parse_params(bad, None)


def test_sweep_csv_reproducible(workdir):
    args = ["sweep", "--ratios", "0.4,0.5", "--n", "40", "--trials", "2", "--seed", "4"]
    assert main(args + ["--out", "a.csv"]) == 0
    assert main(args + ["--out", "b.csv"]) == 0
    a = (workdir / "a.csv").read_text()
    assert a == (workdir / "b.csv").read_text()
    assert a.splitlines()[0].startswith("algorithm,ratio,n,k,trials,successes,success_rate")
    assert len(a.splitlines()) == 3


def test_sweep_greedy_guarantee(workdir):
    assert main(["sweep", "--algorithm", "greedy", "--ratios", "0.5", "--n", "20,30",
                 "--trials", "5", "--format", "json", "--out", "s.json"]) == 0
    rows = json.loads((workdir / "s.json").read_text())["rows"]
    assert all(r["success_rate"] == 1.0 for r in rows)


def test_f4_prefix(workdir, capsys):
    assert main(["f4", "--limit", "24", "--relabel-checks", "10", "--out", "f4.json"]) == 0
    assert "24 instances, 0 failures" in capsys.readouterr().out
    rep = json.loads((workdir / "f4.json").read_text())
    assert rep["checked"] == 24 and rep["failures"] == []


def test_lemma_check(workdir, capsys):
    assert main(["lemma-check", "0.778", "--grid-step", "1e-3", "--out", "l.json"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "c* = 0.7776" in out
    assert main(["lemma-check", "0.5"]) == 1
    assert "below c*" in capsys.readouterr().out
