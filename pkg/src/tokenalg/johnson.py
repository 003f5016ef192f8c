"""Johnson graphs J(n,k) and their closed-form distance-regular data."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .checks import Check, Report, matrix_check
from .graphs import Graph, adjacency, complete_graph, distance_matrices, distance_table, is_connected, laplacian
from .linalg import ExactMatrix, char_poly, commutator, poly_divides, zeros
from .spectra import Spectrum, distinct_eigenvalue_count, exact_spectrum
from .tokens import TokenGraph, binom, binomial_matrix, complement_token_laplacian, token_graph, token_laplacian


@dataclass(frozen=True)
class IntersectionArray:
    """``b = (b_0..b_{d-1})``, ``a = (a_0..a_d)``, ``c = (c_1..c_d)``."""

    d: int
    b: tuple[int, ...]
    a: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        d = self.d
        if d < 0 or len(self.b) != d or len(self.a) != d + 1 or len(self.c) != d:
            raise ValueError(f"inconsistent intersection array lengths for d={d}")
        if any(x < 0 for x in self.b + self.a + self.c):
            raise ValueError("intersection numbers must be nonnegative")
        k = self.degree
        for j in range(d + 1):
            if self.a[j] + self.b_at(j) + self.c_at(j) != k:
                raise ValueError(f"a_{j} + b_{j} + c_{j} != b_0 at j={j}")

    @property
    def degree(self) -> int:
        return self.b[0] if self.d else self.a[0]

    def b_at(self, j: int) -> int:
        return self.b[j] if j < self.d else 0

    def c_at(self, j: int) -> int:
        return self.c[j - 1] if j > 0 else 0

    def to_json(self) -> dict:
        return {"d": self.d, "b": list(self.b), "a": list(self.a), "c": list(self.c)}


def count_intersection_array(g: Graph, table: Sequence[Sequence[int]] | None = None) -> IntersectionArray | None:
    """Intersection array read off the distance partition, or ``None`` when the
    counts ``|G_{i-1}(u) & G(v)|``, ``|G_i(u) & G(v)|``, ``|G_{i+1}(u) & G(v)|``
    depend on the pair ``(u, v)`` at distance ``i``."""
    if table is None:
        table = distance_table(g)
    d = max(max(row) for row in table)
    nbrs = g.neighbors
    found: dict[int, tuple[int, int, int]] = {}
    for u in range(g.n):
        row = table[u]
        for v in range(g.n):
            i = row[v]
            counts = [0, 0, 0]
            for w in nbrs[v + 1]:
                delta = row[w - 1] - i
                counts[delta + 1] += 1
            key = tuple(counts)
            if found.setdefault(i, key) != key:
                return None
    c = tuple(found[i][0] for i in range(1, d + 1))
    a = tuple(found[i][1] for i in range(d + 1))
    b = tuple(found[i][2] for i in range(d))
    return IntersectionArray(d, b, a, c)


def _reduced_k(n: int, k: int) -> int:
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return min(k, n - k)


def johnson_graph(n: int, k: int) -> TokenGraph:
    _reduced_k(n, k)
    return token_graph(complete_graph(n), k)


def johnson_intersection_array(n: int, k: int) -> IntersectionArray:
    """``b_j = (k-j)(n-k-j)``, ``c_j = j^2``; ``k > n-k`` uses ``n-k`` (same graph up to relabeling)."""
    k = _reduced_k(n, k)
    b = tuple((k - j) * (n - k - j) for j in range(k))
    c = tuple(j * j for j in range(1, k + 1))
    deg = k * (n - k)
    a = tuple(deg - (b[j] if j < k else 0) - (c[j - 1] if j else 0) for j in range(k + 1))
    return IntersectionArray(k, b, a, c)


def quotient_matrix(ia: IntersectionArray) -> ExactMatrix:
    """Tridiagonal: ``a`` on the diagonal, ``b`` below, ``c`` above (columns sum to ``b_0``)."""
    size = ia.d + 1
    rows = [[0] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = ia.a[i]
        if i < ia.d:
            rows[i + 1][i] = ia.b[i]
            rows[i][i + 1] = ia.c[i]
    return ExactMatrix(rows)


def johnson_laplacian_spectrum(n: int, k: int) -> Spectrum:
    """Eigenvalues ``j(n+1-j)`` with multiplicity ``C(n,j) - C(n,j-1)``, ``j = 0..min(k, n-k)``."""
    k = _reduced_k(n, k)
    return Spectrum(tuple((j * (n + 1 - j), binom(n, j) - binom(n, j - 1)) for j in range(k + 1)), "exact")


def johnson_distance(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise ValueError(f"subsets of different sizes: {len(a)} and {len(b)}")
    return len(a) - len(set(a) & set(b))


def verify_M_identity(n: int, k: int, g: Graph | None = None) -> Report:
    """``B Bt = sum_i (k-i) A_i`` over the distance matrices of J(n,k); with ``g``,
    also pairwise commutation of ``M``, ``L_k(g)``, ``L_k(complement g)`` and ``L_J``."""
    _reduced_k(n, k)
    rep = Report(f"M identity n={n} k={k}")
    b = binomial_matrix(n, k)
    m = b @ b.T
    dm = distance_matrices(johnson_graph(n, k).graph)
    total = zeros(m.rows, m.cols)
    for i in range(dm.diameter + 1):
        total = total + dm[i] * (k - i)
    rep.add(matrix_check("B Bt = sum (k-i) A_i", m, total))
    rep.data["coefficients"] = [k - i for i in range(dm.diameter + 1)]
    if g is not None:
        if g.n != n:
            raise ValueError(f"graph has {g.n} vertices, expected {n}")
        lk = token_laplacian(g, k)
        lbar = complement_token_laplacian(g, k)
        family = {"M": m, "Lk": lk, "Lk(complement)": lbar, "LJ": lk + lbar}
        names = list(family)
        for i, x in enumerate(names):
            for y in names[i + 1:]:
                rep.add(matrix_check(f"[{x}, {y}] = 0", commutator(family[x], family[y]), zeros(m.rows, m.cols)))
    return rep


def verify_johnson(n: int, k: int) -> Report:
    """All closed-form checks for J(n,k)."""
    from .orthopoly import is_distance_regular

    kk = _reduced_k(n, k)
    rep = Report(f"Johnson J({n},{k})")
    jg = johnson_graph(n, k)
    g = jg.graph
    a = adjacency(g)
    deg = kk * (n - kk)
    rep.add(Check("regular of degree k(n-k)", set(g.degrees()) == {deg}, None if set(g.degrees()) == {deg} else {"degrees": sorted(set(g.degrees()))}))
    table = distance_table(g)
    diam = max(max(r) for r in table)
    rep.add(Check("diameter min(k, n-k)", diam == kk, None if diam == kk else {"diameter": diam}))
    want = johnson_laplacian_spectrum(n, k)
    got = exact_spectrum(laplacian(g))
    rep.add(Check("Laplacian spectrum j(n+1-j)", got == want, None if got == want else {"computed": got, "closed_form": want}))
    ia = johnson_intersection_array(n, k)
    counted = count_intersection_array(g, table)
    rep.add(Check("intersection array by counting", counted == ia, None if counted == ia else {"counted": counted, "closed_form": ia}))
    q = quotient_matrix(ia)
    ok = poly_divides(char_poly(q), char_poly(a))
    rep.add(Check("charpoly(quotient) | charpoly(A)", ok))
    bad = None
    for r, x in enumerate(jg.labels):
        for s, y in enumerate(jg.labels):
            if table[r][s] != johnson_distance(x, y):
                bad = bad or {"u": list(x), "v": list(y), "bfs": table[r][s], "formula": johnson_distance(x, y)}
    rep.add(Check("distance = k - |A & B|", bad is None, bad))
    for c in verify_M_identity(n, k).checks:
        rep.add(c)
    drg = is_distance_regular(g)
    rep.add(Check("p_d(A) = A_d", drg.drg, None if drg.drg else {"d": drg.d, "diameter": drg.diameter}))
    rep.data["intersection_array"] = ia
    rep.data["laplacian_spectrum"] = want
    rep.data["quotient_matrix"] = q
    return rep


@dataclass(frozen=True)
class BoseMesnerReport:
    dim_A: int
    dim_D: int
    drg: bool
    dim_intersection: int | None = None

    def to_json(self) -> dict:
        return {"dim_A": self.dim_A, "dim_D": self.dim_D, "drg": self.drg, "dim_intersection": self.dim_intersection}


def bose_mesner_check(g: Graph) -> BoseMesnerReport:
    """Dimensions of the adjacency algebra and of the distance-matrix span; for a
    distance-regular graph also confirms ``A_i = p_i(A)`` for every ``i``."""
    from .orthopoly import is_distance_regular

    if not is_connected(g):
        distance_table(g)  # raises DisconnectedGraphError with a witness pair
    dim_a = distinct_eigenvalue_count(adjacency(g))
    dm = distance_matrices(g)
    rep = is_distance_regular(g, full=True)
    inter = None
    if rep.drg:
        if not rep.all_distance_polys:
            raise ArithmeticError("p_d(A) = A_d but some p_i(A) != A_i")
        inter = rep.d + 1
    return BoseMesnerReport(dim_a, dm.diameter + 1, rep.drg, inter)

