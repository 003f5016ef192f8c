from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tokenalg.algebras import (
    NotJohnsonSubgraphError,
    check_commute,
    commute_iff_token,
    elementary_adjacency,
    elementary_laplacian,
    global_algebra,
    johnson_complement,
    local_algebra,
    pairing_table,
    recognize_token_graph,
)
from tokenalg.graphs import Graph, all_graphs, complete_graph, cycle_graph, elementary_graph
from tokenalg.linalg import ExactMatrix, identity, in_span, zeros
from tokenalg.johnson import johnson_graph, johnson_laplacian_spectrum
from tokenalg.tokens import token_graph

from conftest import random_corpus

PRINTED_AE = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0],
]
PRINTED_LE = [
    [0, 0, 0, 0, 0, 0],
    [0, 1, 0, -1, 0, 0],
    [0, 0, 1, 0, -1, 0],
    [0, -1, 0, 1, 0, 0],
    [0, 0, -1, 0, 1, 0],
    [0, 0, 0, 0, 0, 0],
]


# ----------------------------------------------------------------------
# commutation


def test_check_commute_examples(paw):
    res = check_commute(paw, 2)
    assert res.laplacians and bool(res)
    c5 = check_commute(cycle_graph(5), 2)
    assert c5.laplacians and not c5.adjacency and c5.adjacency_witness is not None


def test_commute_exhaustive_five_vertices():
    for n in range(2, 6):
        for g in all_graphs(n):
            for k in (2, 3):
                if k < n:
                    assert check_commute(g, k).laplacians


# ----------------------------------------------------------------------
# pairing


def test_pairing_table_paw(paw):
    t = pairing_table(paw, 2)
    got = [(r.level, r.lam, r.lambar, r.level_value) for r in t.rows]
    assert got == [(0, 0, 0, 0), (1, 1, 3, 4), (1, 3, 1, 4), (1, 4, 0, 4), (2, 3, 3, 6), (2, 5, 1, 6)]
    assert t.exact and t.holds


def test_pairing_table_complete_graph():
    for n in range(2, 7):
        for k in range(1, n // 2 + 1):
            t = pairing_table(complete_graph(n), k)
            assert all(r.lambar == 0 for r in t.rows)
            assert sorted(r.lam for r in t.rows) == johnson_laplacian_spectrum(n, k).values()


def test_pairing_level_one_is_classical():
    for g in random_corpus([4, 5, 6, 7], 40, seed=21):
        t = pairing_table(g, 1)
        assert t.holds
        assert len(t.level(1)) == g.n - 1


def test_pairing_level_sizes_and_order():
    for g in random_corpus([5, 6], 30, seed=22):
        t = pairing_table(g, 2)
        assert len(t.rows) == 15 if g.n == 6 else len(t.rows) == 10
        for j in range(3):
            lev = t.level(j)
            assert [float(r.lam) for r in lev] == sorted(float(r.lam) for r in lev)
            assert [float(r.lambar) for r in lev] == sorted((float(r.lambar) for r in lev), reverse=True)


def test_pairing_nonintegral_uses_tolerance():
    g = Graph(5, ((1, 2), (2, 3), (3, 4), (4, 5)))
    t = pairing_table(g, 2)
    assert not t.exact and t.holds and t.min_gap > 0
    assert "min_gap" in t.to_json()


def test_pairing_range(paw):
    with pytest.raises(ValueError):
        pairing_table(paw, 3)


def test_pairing_csv(paw):
    rows = pairing_table(paw, 2).csv_rows()
    assert rows[0] == ["level", "index", "lambda", "lambda_complement", "level_value"]
    assert rows[2] == [1, 1, "1", "3", 4]


# ----------------------------------------------------------------------
# local algebra


def test_local_algebra_paw_forced_weights(paw):
    rep = local_algebra(paw, 2, alpha=2, beta=1)
    assert rep.dim == 6 and rep.monomial_rank == 6
    assert list(rep.thetas) == [0, 5, 7, 8, 9, 11]
    assert rep.passed, rep.checks.failures()
    assert rep.pairing_discrepancy is None


def test_local_algebra_default_weights(paw):
    rep = local_algebra(paw, 2)
    assert rep.alpha == 1 and rep.beta == Fraction(1, 4)
    assert rep.passed and rep.dim == 6


def test_local_algebra_lower_bound():
    rep = local_algebra(complete_graph(4), 2)
    assert rep.dim == 3 and rep.passed


def test_idempotents_paw(paw):
    rep = local_algebra(paw, 2, alpha=2, beta=1)
    total = zeros(6, 6)
    weighted = zeros(6, 6)
    for e, t in zip(rep.idempotents, rep.thetas):
        total = total + e
        weighted = weighted + e * t
        assert e @ e == e
    assert total == identity(6) and weighted == rep.R


def test_non_separating_weights_are_reported(paw):
    # 1*L + 1*Lbar collapses pairs on the same level.
    rep = local_algebra(paw, 2, alpha=1, beta=1)
    assert not rep.checks["R has d+1 distinct eigenvalues"].passed


def test_local_algebra_random_counts_agree():
    r = random.Random(5)
    for g in random_corpus([4, 5], 100, seed=31):
        k = r.choice([1, 2])
        rep = local_algebra(g, k)
        assert rep.dim == rep.monomial_rank
        assert rep.passed, rep.checks.failures()


def test_local_algebra_numeric_mode():
    g = Graph(5, ((1, 2), (2, 3), (3, 4), (4, 5)))
    rep = local_algebra(g, 2)
    assert rep.joint.mode == "approximate"
    assert rep.passed, rep.checks.failures()
    assert rep.notes


def test_local_algebra_k_above_half():
    g = Graph(5, ((1, 2), (2, 3), (1, 3), (4, 5)))
    rep = local_algebra(g, 3)
    assert rep.passed and rep.dim >= 3


def test_local_algebra_json(paw):
    obj = local_algebra(paw, 2, alpha=2, beta=1).to_json()
    assert obj["dim"] == 6 and obj["R_eigenvalues"] == ["0", "5", "7", "8", "9", "11"]
    assert ExactMatrix.from_json(obj["R"]) == local_algebra(paw, 2, alpha=2, beta=1).R


# ----------------------------------------------------------------------
# global algebra


def test_elementary_matrices_printed_example():
    assert elementary_adjacency(4, 2, (1, 2)) == ExactMatrix(PRINTED_AE)
    assert elementary_laplacian(4, 2, (1, 2)) == ExactMatrix(PRINTED_LE)


def test_elementary_matrix_structure():
    for n in range(2, 7):
        for k in range(1, n):
            for e in [(1, 2), (1, n)] if n > 2 else [(1, 2)]:
                a = elementary_adjacency(n, k, e)
                assert all(sum(row) in (0, 1) for row in a.to_lists())
                assert elementary_laplacian(n, k, e) == token_graph(elementary_graph(n, e), k).laplacian()


def test_elementary_invalid_edge():
    with pytest.raises(ValueError):
        elementary_adjacency(4, 2, (1, 1))
    with pytest.raises(ValueError):
        elementary_adjacency(4, 2, (1, 5))


def test_sum_of_elementary_is_johnson():
    total = zeros(6, 6)
    for e in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]:
        total = total + elementary_adjacency(4, 2, e)
    assert total == token_graph(complete_graph(4), 2).adjacency()


def test_global_algebra_examples():
    g42 = global_algebra(4, 2)
    assert g42.dim == 6 and g42.passed
    g52 = global_algebra(5, 2)
    assert g52.dim == 10 and g52.passed
    a12, a13 = g52.elementary[(1, 2)], g52.elementary[(1, 3)]
    assert a12 @ a13 != a13 @ a12
    for n in range(2, 6):
        rep = global_algebra(n, 1)
        assert rep.dim == n * (n - 1) // 2 and rep.passed


def test_global_algebra_range():
    with pytest.raises(ValueError):
        global_algebra(4, 4)


def test_global_algebra_contains_token_laplacians(paw):
    rep = global_algebra(4, 2)
    basis = []
    for a in rep.elementary.values():
        basis += [a, a @ a]
    assert in_span(token_graph(paw, 2).laplacian(), basis)


# ----------------------------------------------------------------------
# recognition


def test_recognize_examples(paw):
    octa = johnson_graph(4, 2).graph
    assert recognize_token_graph(octa, 4, 2).graph == complete_graph(4)
    assert recognize_token_graph(token_graph(paw, 2).graph, 4, 2).graph == paw
    minus = Graph(6, octa.edges[1:])
    res = recognize_token_graph(minus, 4, 2)
    assert not res and res.witness["present"] == 1 and res.witness["class_size"] == 2


def test_recognize_rejects_non_subgraph():
    with pytest.raises(NotJohnsonSubgraphError):
        recognize_token_graph(Graph(6, ((1, 6),)), 4, 2)  # {1,2} and {3,4} are disjoint
    with pytest.raises(NotJohnsonSubgraphError):
        recognize_token_graph(Graph(5), 4, 2)


def test_recognize_roundtrip_n5():
    for g in all_graphs(5):
        for k in (1, 2):
            assert recognize_token_graph(token_graph(g, k).graph, 5, k).graph == g


def test_commute_iff_token_examples(paw):
    rep = commute_iff_token(token_graph(paw, 2).graph, 4, 2)
    assert rep.commutes and rep.recognized and rep.agree
    octa = johnson_graph(4, 2).graph
    rep = commute_iff_token(Graph(6, octa.edges[1:]), 4, 2)
    assert not rep.commutes and not rep.recognized and rep.agree
    rep = commute_iff_token(octa, 4, 2)
    assert rep.commutes and rep.recognized and rep.recognition.graph == complete_graph(4)
    assert johnson_complement(octa, 4, 2).m == 0


def test_commute_iff_token_random_small():
    r = random.Random(2)
    j = johnson_graph(5, 2).graph
    seen = set()
    for _ in range(100):
        if r.random() < 0.5:
            h = Graph(5, tuple(e for e in complete_graph(5).edges if r.random() < 0.5))
            s = token_graph(h, 2).graph
        else:
            s = Graph(j.n, tuple(e for e in j.edges if r.random() < 0.5))
        rep = commute_iff_token(s, 5, 2)
        assert rep.agree
        seen.add(rep.recognized)
    assert seen == {True, False}
