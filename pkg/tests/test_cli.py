from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from tokenalg import cli
from tokenalg.checks import Check, Report
from tokenalg.graphs import Graph, graph_to_graph6
from tokenalg.johnson import johnson_graph
from tokenalg.linalg import ExactMatrix, RatPoly
from tokenalg.spectra import Spectrum
from tokenalg.tokens import binomial_matrix, token_graph

from conftest import PAW_EDGES


@pytest.fixture
def paw_file(tmp_path):
    p = tmp_path / "paw.el"
    p.write_text("n 4\n" + "".join(f"{u} {v}\n" for u, v in PAW_EDGES))
    return str(p)


def run_json(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def edge_list_file(tmp_path, g, name="s.el"):
    p = tmp_path / name
    p.write_text(f"n {g.n}\n" + "".join(f"{u} {v}\n" for u, v in g.edges))
    return str(p)


# ----------------------------------------------------------------------
# exit codes


def test_verify_all_passes(paw_file, capsys):
    code, rep = run_json(["verify-all", "--input", paw_file, "--k", "2"], capsys)
    assert code == 0 and rep["passed"]
    assert set(rep["results"]) == {"token_theorem", "commute", "pairing", "local_algebra",
                                   "hoffman_connected", "hoffman_regular"}


def test_usage_errors_exit_2(paw_file, tmp_path, capsys):
    bad = tmp_path / "bad.el"
    bad.write_text("n 3\n1 9\n")
    assert cli.run(["token", "--input", paw_file, "--k", "5"]) == 2
    assert cli.run(["token", "--input", paw_file]) == 2
    assert cli.run(["token", "--input", str(bad), "--k", "1"]) == 2
    assert cli.run(["token", "--input", str(tmp_path / "missing"), "--k", "1"]) == 2
    assert cli.run(["bogus"]) == 2
    assert cli.run(["johnson", "--n", "4"]) == 2
    assert cli.run(["pair", "--input", paw_file, "--k", "3"]) == 2
    assert cli.run(["poly", "--input", paw_file, "--k", "2", "--kind", "adjacency"]) == 2
    assert cli.run(["johnson", "--n", "4", "--k", "2", "--format", "csv"]) == 2
    err = capsys.readouterr().err
    assert "line" in err and "--k is required" in err


def test_recognize_non_subgraph_is_usage_error(tmp_path):
    p = tmp_path / "x.el"
    p.write_text("n 6\n1 6\n")
    assert cli.run(["recognize", "--input", str(p), "--n", "4", "--k", "2"]) == 2


def test_failed_check_exits_1(paw_file, monkeypatch, capsys):
    def broken(g, k, tol=None):
        return Report("theorem", [Check("forced", False, {"row": 1})])

    monkeypatch.setattr(cli.tokens, "verify_token_theorem", broken)
    code, rep = run_json(["token", "--input", paw_file, "--k", "2", "--verify"], capsys)
    assert code == 1 and not rep["passed"]
    assert rep["results"]["theorem"]["checks"][0]["witness"] == {"row": 1}


def test_help_exits_0(capsys):
    assert cli.run(["--help"]) == 0
    assert "verify-all" in capsys.readouterr().out


# ----------------------------------------------------------------------
# outputs


def test_token_output_and_binomial(paw_file, capsys):
    code, rep = run_json(["token", "--input", paw_file, "--k", "2", "--emit-binomial", "--verify"], capsys)
    assert code == 0
    res = rep["results"]["token_graph"]
    tg = token_graph(Graph(4, tuple(PAW_EDGES)), 2)
    assert res["edges"] == [list(e) for e in tg.graph.edges] and res["edge_count"] == 8
    assert ExactMatrix.from_json(res["binomial"]) == binomial_matrix(4, 2)
    assert rep["results"]["theorem"]["passed"]


def test_input_digest_and_graph6(paw_file, tmp_path, capsys):
    import hashlib

    _, rep = run_json(["pair", "--input", paw_file, "--k", "2"], capsys)
    with open(paw_file, "rb") as fh:
        assert rep["input_sha256"] == hashlib.sha256(fh.read()).hexdigest()
    g6 = tmp_path / "paw.g6"
    g6.write_bytes(graph_to_graph6(Graph(4, tuple(PAW_EDGES))) + b"\n")
    _, rep6 = run_json(["pair", "--input", str(g6), "--k", "2"], capsys)
    assert rep6["results"] == rep["results"]


def test_pair_csv(paw_file, capsys):
    assert cli.run(["pair", "--input", paw_file, "--k", "2", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["level", "index", "lambda", "lambda_complement", "level_value"]
    assert [r[2:] for r in rows[1:]] == [["0", "0", "0"], ["1", "3", "4"], ["3", "1", "4"], ["4", "0", "4"],
                                         ["3", "3", "6"], ["5", "1", "6"]]


def test_poly_json_roundtrip_and_csv(paw_file, tmp_path, capsys):
    table = tmp_path / "q.csv"
    code, rep = run_json(["poly", "--input", paw_file, "--k", "2", "--alpha", "2", "--beta", "1",
                          "--csv", str(table)], capsys)
    assert code == 0
    polys = [RatPoly.from_json(p) for p in rep["results"]["family"]["polys"]]
    assert [p.degree for p in polys] == list(range(6))
    assert polys[1] == RatPoly((Fraction(40, 11), Fraction(-6, 11)))
    assert rep["results"]["hoffman"]["holds"]
    rows = list(csv.reader(table.open()))
    assert len(rows) == 201 and rows[0] == ["x", "p0", "p1", "p2", "p3", "p4", "p5"]
    assert float(rows[1][0]) == 0.0 and float(rows[-1][0]) == pytest.approx(11.0)


def test_poly_adjacency(paw_file, capsys):
    code, rep = run_json(["poly", "--input", paw_file, "--kind", "adjacency"], capsys)
    assert code == 0 and not rep["results"]["hoffman"]["holds"]


def test_johnson_json(capsys):
    code, rep = run_json(["johnson", "--n", "6", "--k", "3", "--verify"], capsys)
    assert code == 0
    spec = Spectrum.from_json(rep["results"]["laplacian_spectrum"])
    assert spec == Spectrum(((0, 1), (6, 5), (10, 9), (12, 5)))
    ia = rep["results"]["intersection_array"]
    assert ia["b"] == [9, 4, 1] and ia["c"] == [1, 4, 9]


def test_algebra_commands(paw_file, capsys):
    code, rep = run_json(["algebra", "local", "--input", paw_file, "--k", "2", "--alpha", "2", "--beta", "1"],
                         capsys)
    assert code == 0 and rep["results"]["local_algebra"]["dim"] == 6
    code, rep = run_json(["algebra", "global", "--n", "5", "--k", "2"], capsys)
    assert code == 0 and rep["results"]["global_algebra"]["dim"] == 10


def test_recognize_accept_and_reject(tmp_path, capsys):
    octa = johnson_graph(4, 2).graph
    code, rep = run_json(["recognize", "--input", edge_list_file(tmp_path, octa), "--n", "4", "--k", "2"], capsys)
    assert code == 0 and rep["results"]["recognition"]["accepted"]
    minus = Graph(6, octa.edges[1:])
    code, rep = run_json(["recognize", "--input", edge_list_file(tmp_path, minus, "m.el"), "--n", "4", "--k", "2"],
                         capsys)
    assert code == 0 and not rep["results"]["recognition"]["accepted"]
    assert rep["results"]["commute_iff_token"]["commutes"] is False


def test_out_file_and_determinism(paw_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify-all", "--input", paw_file, "--k", "2"]
    assert cli.run(argv + ["--out", str(a)]) == 0
    assert cli.run(argv + ["--out", str(b)]) == 0
    assert capsys.readouterr().out == ""
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    assert ja["results"] == jb["results"] and ja["timing"].keys() == jb["timing"].keys()


def test_module_entry_point(paw_file):
    proc = subprocess.run([sys.executable, "-m", "tokenalg", "pair", "--input", paw_file, "--k", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
