"""k-token graphs, the binomial matrix, and the intertwining identities with ``L_1``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .checks import Check, Report, matrix_check
from .graphs import Graph, adjacency, complement, laplacian
from .linalg import (
    ExactMatrix,
    all_ones,
    as_scalar,
    char_poly,
    hstack,
    identity,
    nullspace,
    poly_divides,
    rank,
)
from .spectra import DEFAULT_TOL, spectrum

KSubset = tuple[int, ...]


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def k_subsets(n: int, k: int) -> list[KSubset]:
    """All k-subsets of ``1..n`` in lexicographic order (rank = list index)."""
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    return list(combinations(range(1, n + 1), k))


@lru_cache(maxsize=64)
def subset_masks(n: int, k: int) -> tuple[tuple[KSubset, ...], tuple[int, ...], dict[int, int]]:
    """Lexicographic k-subsets, their bitmasks (bit ``x`` for element ``x``), and mask -> rank."""
    labels = tuple(k_subsets(n, k))
    masks = tuple(sum(1 << x for x in a) for a in labels)
    return labels, masks, {m: i for i, m in enumerate(masks)}


def subset_rank(subset: Sequence[int], n: int) -> int:
    """0-based lexicographic rank of a strictly increasing k-subset of ``1..n``."""
    k = len(subset)
    r = 0
    prev = 0
    for i, c in enumerate(subset, start=1):
        if not prev < c <= n:
            raise ValueError(f"not a strictly increasing subset of 1..{n}: {tuple(subset)}")
        for j in range(prev + 1, c):
            r += binom(n - j, k - i)
        prev = c
    return r


def subset_unrank(r: int, n: int, k: int) -> KSubset:
    if not 0 <= r < binom(n, k):
        raise ValueError(f"rank {r} out of range for C({n},{k})")
    out = []
    x = 1
    for i in range(k, 0, -1):
        while True:
            block = binom(n - x, i - 1)
            if r < block:
                break
            r -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def symmetric_difference(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Symmetric difference of two sorted sequences by a linear merge."""
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            i += 1
            j += 1
        elif a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def tokens_adjacent(a: Sequence[int], b: Sequence[int], g: Graph) -> bool:
    d = symmetric_difference(a, b)
    return len(d) == 2 and g.has_edge(d[0], d[1])


@dataclass(frozen=True)
class TokenGraph:
    """``F_k(base)``; vertex ``r + 1`` of ``graph`` is the k-subset ``labels[r]``."""

    base: Graph
    k: int
    graph: Graph
    labels: tuple[KSubset, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @cached_property
    def index(self) -> dict[KSubset, int]:
        return {s: i for i, s in enumerate(self.labels)}

    def laplacian(self) -> ExactMatrix:
        return laplacian(self.graph)

    def adjacency(self) -> ExactMatrix:
        return adjacency(self.graph)


def token_graph(g: Graph, k: int) -> TokenGraph:
    """Vertices are the k-subsets; ``A ~ B`` iff ``A xor B`` is an edge of ``g``."""
    n = g.n
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    labels, masks, index = subset_masks(n, k)
    nbrs = g.neighbors
    edges = []
    for r, a in enumerate(labels):
        mask = masks[r]
        for x in a:
            for y in nbrs[x]:
                if mask >> y & 1:
                    continue
                s = index[mask ^ (1 << x) ^ (1 << y)]
                if r < s:
                    edges.append((r + 1, s + 1))
    return TokenGraph(g, k, Graph(len(labels), tuple(edges)), labels)


def token_laplacian(g: Graph, k: int) -> ExactMatrix:
    return laplacian(token_graph(g, k).graph)


def complement_relabel(tg: TokenGraph) -> Graph:
    """Relabel ``F_k(G)`` by ``A -> [n] - A`` into the vertex order of ``F_{n-k}(G)``."""
    n = tg.n
    full = set(range(1, n + 1))
    target = {s: i for i, s in enumerate(k_subsets(n, n - tg.k))}
    perm = [target[tuple(sorted(full - set(a)))] + 1 for a in tg.labels]
    return Graph(tg.graph.n, tuple((perm[u - 1], perm[v - 1]) for u, v in tg.graph.edges))


def binomial_matrix(n: int, k: int) -> ExactMatrix:
    """``C(n,k) x n`` matrix whose row ``r`` is the indicator of the r-th k-subset."""
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    subsets = k_subsets(n, k)
    a = np.zeros((len(subsets), n), dtype=object)
    a[:] = 0
    for r, s in enumerate(subsets):
        for x in s:
            a[r, x - 1] = 1
    return ExactMatrix._wrap(a, normalize=False)


def binomial_gram_expected(n: int, k: int) -> ExactMatrix:
    """``C(n-2,k-1) I + C(n-2,k-2) J``."""
    return identity(n) * binom(n - 2, k - 1) + all_ones(n, n) * binom(n - 2, k - 2)


def lift_vector(b: ExactMatrix, v: Sequence) -> tuple:
    return b.apply(v)


def project_vector(b: ExactMatrix, u: Sequence) -> tuple:
    return b.T.apply(u)


# ----------------------------------------------------------------------
# verification


def verify_intertwining(g: Graph, k: int) -> Report:
    """Exact checks of ``B L1 = Lk B``, ``L1 = Bt Lk B / C(n-2,k-1)`` and
    invariance of the column space of ``B`` under ``Lk``."""
    n = g.n
    rep = Report(f"intertwining n={n} k={k}")
    b = binomial_matrix(n, k)
    l1 = laplacian(g)
    lk = token_laplacian(g, k)
    rep.add(matrix_check("B L1 = Lk B", b @ l1, lk @ b))
    c = binom(n - 2, k - 1)
    if c == 0:
        rep.add(Check("L1 = Bt Lk B / C(n-2,k-1)", False, {"reason": "C(n-2,k-1) = 0"}))
    else:
        rep.add(matrix_check("L1 = Bt Lk B / C(n-2,k-1)", (b.T @ lk @ b) * Fraction(1, c), l1))
    rb, rext = rank(b), rank(hstack(b, lk @ b))
    rep.add(Check("col(B) is Lk-invariant", rb == rext, None if rb == rext else {"rank B": rb, "rank [B|LkB]": rext}))
    return rep


def verify_charpoly_divides(g: Graph, k: int) -> Check:
    p1 = char_poly(laplacian(g))
    pk = char_poly(token_laplacian(g, k))
    ok = poly_divides(p1, pk)
    return Check("charpoly(L1) | charpoly(Lk)", ok, None if ok else {"remainder": (pk % p1).to_json()})


def verify_eigenvector_transfer(g: Graph, k: int, tol: float = DEFAULT_TOL) -> Report:
    """Eigenvectors move between ``L1`` and ``Lk`` through ``B`` and ``Bt``.

    Integer eigenvalues use exact nullspace bases; other eigenvalues use
    numeric eigenvectors with a relative residual test at 1e-6.
    """
    n = g.n
    rep = Report(f"eigenvector transfer n={n} k={k}")
    b = binomial_matrix(n, k)
    l1 = laplacian(g)
    lk = token_laplacian(g, k)
    lifted = projected = 0
    bad_lift = bad_proj = None
    for lam, _ in spectrum(l1, "auto", tol).entries:
        for v in _eigvecs(l1, lam):
            lifted += 1
            if not _is_eigvec(lk, _apply(b, v), lam):
                bad_lift = bad_lift or {"eigenvalue": lam}
    bt = b.T
    for lam, _ in spectrum(lk, "auto", tol).entries:
        for u in _eigvecs(lk, lam):
            btu = _apply(bt, u)
            if _is_zero(btu):
                continue
            projected += 1
            if not _is_eigvec(l1, btu, lam):
                bad_proj = bad_proj or {"eigenvalue": lam}
    rep.add(Check("B v is an eigenvector of Lk", bad_lift is None, bad_lift, {"vectors": lifted}))
    rep.add(Check("Bt u is an eigenvector of L1", bad_proj is None, bad_proj, {"vectors": projected}))
    return rep


# Exact vectors are tuples of int/Fraction; numeric ones are float ndarrays.
_NUMERIC_RESIDUAL = 1e-6


def _eigvecs(m: ExactMatrix, lam):
    if isinstance(lam, int):
        return nullspace(m - identity(m.rows) * lam)
    w, v = np.linalg.eigh(m.to_float())
    return [v[:, i] for i in range(len(w)) if abs(w[i] - lam) <= _NUMERIC_RESIDUAL]


def _apply(m: ExactMatrix, v):
    if isinstance(v, tuple):
        return m.apply(v)
    return m.to_float() @ v


def _is_zero(v) -> bool:
    if isinstance(v, tuple):
        return all(x == 0 for x in v)
    return float(np.linalg.norm(v)) <= _NUMERIC_RESIDUAL


def _is_eigvec(m: ExactMatrix, v, lam) -> bool:
    if _is_zero(v):
        return False
    if isinstance(v, tuple):
        return m.apply(v) == tuple(as_scalar(lam * x) for x in v)
    r = m.to_float() @ v - float(lam) * v
    return float(np.linalg.norm(r)) <= _NUMERIC_RESIDUAL * max(1.0, float(np.linalg.norm(v)))


def verify_token_theorem(g: Graph, k: int, tol: float = DEFAULT_TOL) -> Report:
    """All six statements relating ``L1`` and ``Lk``."""
    rep = verify_intertwining(g, k)
    rep.title = f"token theorem n={g.n} k={k}"
    rep.add(verify_charpoly_divides(g, k))
    for c in verify_eigenvector_transfer(g, k, tol).checks:
        rep.add(c)
    return rep


def verify_binomial_gram(n: int, k: int) -> Check:
    b = binomial_matrix(n, k)
    return matrix_check(f"BtB = C(n-2,k-1) I + C(n-2,k-2) J  (n={n}, k={k})", b.T @ b, binomial_gram_expected(n, k))


def complement_token_laplacian(g: Graph, k: int) -> ExactMatrix:
    return token_laplacian(complement(g), k)
