import csv
import io
import json

import pytest

from cutquery.cli import main
from cutquery.experiments import CSV_HEADER, fit_exponent, run_trial, scale, write_csv
from cutquery.graph import read_graph


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_header_exact():
    assert ",".join(CSV_HEADER) == ("n,seed,algorithm,family,profile,cut_queries,additive_queries,"
                                    "matrix_cut_queries,quantum_charged,audit_queries,correct,rounds")


@pytest.mark.parametrize("algo", ["components", "forest", "bipartite", "acyclic", "learn"])
def test_run_trial(algo):
    r = run_trial(algo, "cycle", 12, 3, profile="desk")
    assert r.correct and r.ledger_ok and r.failure is None


def test_csv_append_safe(tmp_path):
    target = tmp_path / "runs.csv"
    recs = scale("components", "path", [8, 16], 2, profile="desk")
    write_csv(recs, target)
    write_csv(recs, target)
    rows = list(csv.reader(target.open()))
    assert rows[0] == CSV_HEADER and len(rows) == 1 + 8
    assert [int(r[0]) for r in rows[1:5]] == [8, 8, 16, 16]


def test_scale_parallel_matches_serial():
    a = scale("components", "erdos_renyi", [16, 24], 3, profile="desk", seed=5)
    b = scale("components", "erdos_renyi", [16, 24], 3, profile="desk", seed=5, jobs=2)
    assert write_csv(a) == write_csv(b)


def test_fit_exponent():
    ns = [64, 128, 256, 512]
    assert fit_exponent(ns, [n ** 0.3 * 7 for n in ns]) == pytest.approx(0.3)


def test_cli_components_example(capsys):
    code, out, _ = run_cli(capsys, "components", "--n", "64", "--family", "two_cliques", "--seed", "7")
    d = json.loads(out)
    assert code == 0 and len(d["components"]) == 2 and d["correct"]
    assert d["profile"] == "paper" and "queries" in d and "rounds" in d


def test_cli_deterministic(capsys):
    args = ["forest", "--n", "20", "--family", "erdos_renyi", "--seed", "3", "--profile", "desk"]
    _, a, _ = run_cli(capsys, *args)
    _, b, _ = run_cli(capsys, *args)
    assert a == b


@pytest.mark.parametrize("algo", ["components", "forest", "bipartite", "acyclic"])
def test_cli_audit_toggle_keeps_charges(capsys, algo):
    base = [algo, "--n", "24", "--family", "erdos_renyi", "--seed", "2", "--profile", "desk"]
    _, on, _ = run_cli(capsys, *base, "--audit", "on")
    _, off, _ = run_cli(capsys, *base, "--audit", "off")
    q_on, q_off = json.loads(on)["queries"], json.loads(off)["queries"]
    assert q_off["audit"] == 0
    q_on.pop("audit"), q_off.pop("audit")
    assert q_on == q_off
    assert "correct" not in json.loads(off)


def test_cli_csv_format(capsys):
    code, out, _ = run_cli(capsys, "components", "--n", "8", "--family", "path", "--format", "csv",
                           "--profile", "desk")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_HEADER and rows[1][2] == "components" and rows[1][10] == "true"


def test_cli_gen_and_learn(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert main(["gen", "--family", "weighted_random", "--n", "9", "--M", "5", "--seed", "1",
                 "--out", str(g)]) == 0
    learned = tmp_path / "l.txt"
    code, out, _ = run_cli(capsys, "learn", "--graph", str(g), "--M", "5", "--graph-out", str(learned))
    d = json.loads(out)
    assert code == 0 and d["correct"] and d["queries"]["cut"] == 3 * 9 * 3
    assert read_graph(learned) == read_graph(g)


def test_cli_learn_additive(capsys):
    code, out, _ = run_cli(capsys, "learn", "--family", "cycle", "--n", "32", "--oracle", "additive",
                           "--method", "degree", "--degree", "2")
    d = json.loads(out)
    assert code == 0 and d["correct"] and d["queries"]["cut"] == 0


def test_cli_adversary(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "adversary", "--n", "4", "--queries", "0", "--out", str(tmp_path))
    assert code == 0
    G1, G2 = read_graph(tmp_path / "G1.graph"), read_graph(tmp_path / "G2.graph")
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert G1.cut({0}) == G2.cut({0})
    assert cert["totals"] == [G1.total_weight, G2.total_weight] and cert["y_inf_norm"] == 3


def test_cli_scale(tmp_path, capsys):
    target = tmp_path / "s.csv"
    code, _, _ = run_cli(capsys, "scale", "--algo", "components", "--family", "erdos_renyi",
                         "--n", "16,32", "--trials", "3", "--profile", "desk", "--format", "csv",
                         "--out", str(target))
    rows = list(csv.reader(target.open()))
    assert code == 0 and rows[0] == CSV_HEADER and len(rows) == 7
    assert {"n", "seed", "profile", "cut_queries", "quantum_charged", "correct"} <= set(rows[0])


def test_cli_empty_test(capsys):
    code, out, _ = run_cli(capsys, "empty-test", "--family", "path", "--n", "8", "--subset", "0,2,4")
    d = json.loads(out)
    assert code == 0 and d["empty"] and d["correct"]


@pytest.mark.parametrize("argv", [["bogus"], ["components", "--n", "x"], ["components"],
                                  ["components", "--n", "0"], ["adversary", "--n", "4",
                                                               "--queries", "0;1"],
                                  ["components", "--n", "4", "--profile", "fast"]])
def test_cli_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        code = main(argv)
        raise SystemExit(code)
    assert info.value.code not in (0, 2)
    assert capsys.readouterr().err


def test_cli_failure_exit_code(capsys, monkeypatch):
    import cutquery.experiments as ex
    from cutquery.exceptions import NonTerminationError

    def boom(*a, **k):
        raise NonTerminationError("stuck", {"rounds": 3})

    monkeypatch.setattr(ex, "connected_components", boom)
    code, out, _ = run_cli(capsys, "components", "--n", "8", "--family", "path")
    d = json.loads(out)
    assert code == 2 and d["status"] == "failure" and d["failure"]["rounds"] == 3
