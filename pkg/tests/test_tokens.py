from __future__ import annotations

from itertools import combinations
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tokenalg.graphs import Graph, all_graphs, complete_graph, is_bipartite, laplacian, random_graph
from tokenalg.linalg import ExactMatrix, all_ones, identity, nullspace
from tokenalg.tokens import (
    binom,
    binomial_gram_expected,
    binomial_matrix,
    complement_relabel,
    k_subsets,
    lift_vector,
    project_vector,
    subset_rank,
    subset_unrank,
    symmetric_difference,
    token_graph,
    verify_binomial_gram,
    verify_charpoly_divides,
    verify_eigenvector_transfer,
    verify_intertwining,
    verify_token_theorem,
)

from conftest import random_corpus

PRINTED_B = [
    [1, 1, 0, 0],
    [1, 0, 1, 0],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 1, 1],
]


def test_k_subsets_examples():
    assert k_subsets(4, 2) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert k_subsets(5, 0) == [()]
    assert k_subsets(5, 5) == [(1, 2, 3, 4, 5)]
    with pytest.raises(ValueError):
        k_subsets(3, 4)


@given(st.integers(1, 9).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
def test_rank_unrank_bijection(nk):
    n, k = nk
    subsets = k_subsets(n, k)
    for r, s in enumerate(subsets):
        assert subset_rank(s, n) == r
        assert subset_unrank(r, n, k) == s


def test_subset_rank_errors():
    with pytest.raises(ValueError):
        subset_rank((2, 1), 3)
    with pytest.raises(ValueError):
        subset_unrank(10, 4, 2)


@given(st.sets(st.integers(1, 12)), st.sets(st.integers(1, 12)))
def test_symmetric_difference_merge(a, b):
    assert symmetric_difference(sorted(a), sorted(b)) == sorted(a ^ b)


def test_binom_convention():
    assert binom(5, 2) == 10 and binom(2, -1) == 0 and binom(2, 3) == 0


# ----------------------------------------------------------------------
# token graphs


def test_token_graph_examples():
    octa = token_graph(complete_graph(4), 2).graph
    assert (octa.n, octa.m) == (6, 12)
    j52 = token_graph(complete_graph(5), 2).graph
    assert (j52.n, j52.m) == (10, 30) and set(j52.degrees()) == {6}


def test_token_graph_k0_and_range():
    assert token_graph(complete_graph(3), 0).graph == Graph(1)
    with pytest.raises(ValueError):
        token_graph(complete_graph(3), 4)


@settings(max_examples=30)
@given(st.integers(1, 7), st.randoms(use_true_random=False))
def test_first_token_graph_is_base(n, r):
    g = random_graph(n, r)
    assert token_graph(g, 1).graph == g


def test_edge_count_exhaustive_small():
    for n in range(2, 6):
        for g in all_graphs(n):
            for k in range(1, min(3, n - 1) + 1):
                assert token_graph(g, k).graph.m == comb(n - 2, k - 1) * g.m


def test_edge_count_random():
    for g in random_corpus([6, 7], 200):
        for k in (2, 3):
            assert token_graph(g, k).graph.m == comb(g.n - 2, k - 1) * g.m


def test_adjacency_rule_brute_force(paw):
    tg = token_graph(paw, 2)
    for (i, a), (j, b) in combinations(enumerate(tg.labels), 2):
        diff = set(a) ^ set(b)
        want = len(diff) == 2 and paw.has_edge(*sorted(diff))
        assert tg.graph.has_edge(i + 1, j + 1) == want


def test_complementation_symmetry():
    for g in random_corpus([4, 5, 6, 7], 60, seed=3):
        for k in range(1, g.n):
            assert complement_relabel(token_graph(g, k)) == token_graph(g, g.n - k).graph


def test_bipartite_preserved():
    for g in random_corpus([4, 5, 6], 100, seed=5):
        if is_bipartite(g):
            for k in range(1, g.n):
                assert is_bipartite(token_graph(g, k).graph)


def test_johnson_52_is_petersen_complement():
    j52 = token_graph(complete_graph(5), 2).graph
    h = nx.Graph()
    h.add_nodes_from(range(1, 11))
    h.add_edges_from(j52.edges)
    comp = nx.complement(h)
    assert nx.is_isomorphic(comp, nx.petersen_graph())
    assert set(d for _, d in comp.degree()) == {3} and nx.girth(comp) == 5


# ----------------------------------------------------------------------
# binomial matrix


def test_binomial_matrix_printed_example():
    b = binomial_matrix(4, 2)
    assert b == ExactMatrix(PRINTED_B)
    assert b.T @ b == identity(4) * 2 + all_ones(4, 4)


def test_binomial_matrix_k1_is_identity():
    for n in range(1, 7):
        assert binomial_matrix(n, 1) == identity(n)


def test_binomial_gram_identity_all_small():
    for n in range(2, 9):
        for k in range(1, n):
            assert verify_binomial_gram(n, k).passed


def test_binomial_gram_expected_k1():
    assert binomial_gram_expected(5, 1) == identity(5)


def test_lift_and_project(paw):
    b = binomial_matrix(4, 2)
    assert lift_vector(b, (1, 1, 1, 1)) == (2,) * 6
    l1 = laplacian(paw)
    l2 = laplacian(token_graph(paw, 2).graph)
    (v,) = nullspace(l1 - identity(4) * 4)
    bv = lift_vector(b, v)
    assert l2.apply(bv) == tuple(4 * x for x in bv)
    kernel = nullspace(b.T)
    assert kernel
    for u in kernel:
        assert all(x == 0 for x in project_vector(b, u))


# ----------------------------------------------------------------------
# theorem


def test_intertwining_examples(paw):
    assert verify_intertwining(paw, 2).passed
    assert verify_intertwining(complete_graph(4), 2).passed


def test_intertwining_random_six_vertices():
    for g in random_corpus([6], 100, seed=9):
        rep = verify_intertwining(g, 3)
        assert rep.passed, rep.failures()


def test_intertwining_failure_carries_witness(paw):
    # Swap in a wrong Laplacian to see the report machinery flag it.
    from tokenalg.checks import matrix_check

    b = binomial_matrix(4, 2)
    c = matrix_check("B L1 = Lk B", b @ laplacian(paw), laplacian(token_graph(complete_graph(4), 2).graph) @ b)
    assert not c.passed and {"row", "col", "got", "expected"} <= set(c.witness)


def test_charpoly_divides(paw):
    assert verify_charpoly_divides(paw, 2).passed
    for g in random_corpus([5, 6], 30, seed=2):
        assert verify_charpoly_divides(g, 2).passed


def test_eigenvector_transfer_integral_and_irrational(paw):
    assert verify_eigenvector_transfer(paw, 2).passed
    path = Graph(4, ((1, 2), (2, 3), (3, 4)))  # eigenvalues 2 +- sqrt 2 take the numeric path
    rep = verify_eigenvector_transfer(path, 2)
    assert rep.passed
    assert rep.checks[0].detail["vectors"] == 4


def test_token_theorem_full_report(paw):
    rep = verify_token_theorem(paw, 2)
    assert rep.passed and len(rep.checks) == 6
