"""The local algebra generated by ``L_k(G)`` and ``L_k(complement G)``, the global
algebra spanned by the elementary token matrices, and token-graph recognition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import lcm
from typing import Sequence

import numpy as np

from .checks import Check, Report, matrix_check
from .graphs import Graph, adjacency, complement, complete_graph, elementary_graph, laplacian
from .linalg import (
    ExactMatrix,
    as_scalar,
    commutator,
    commutator_is_zero,
    identity,
    in_span,
    rank,
    stack_vectorized,
    zeros,
)
from .spectra import (
    DEFAULT_TOL,
    JointSpectrum,
    NotCommutingError,
    Spectrum,
    joint_spectrum,
    spectrum,
    spectrum_diff,
)
from .tokens import binom, subset_masks, token_graph

PAIRING_TOL = 1e-7


# ----------------------------------------------------------------------
# commutation and pairing


@dataclass(frozen=True)
class CommuteResult:
    """Commutation of the token Laplacians (the claim) and of the token adjacency matrices (for contrast)."""

    laplacians: bool
    adjacency: bool
    laplacian_witness: dict | None = None
    adjacency_witness: dict | None = None

    def __bool__(self):
        return self.laplacians

    def to_json(self) -> dict:
        return {
            "laplacians_commute": self.laplacians,
            "adjacency_commute": self.adjacency,
            "laplacian_witness": self.laplacian_witness,
            "adjacency_witness": self.adjacency_witness,
        }


def _commutator_witness(a: ExactMatrix, b: ExactMatrix) -> dict | None:
    diff = commutator(a, b).first_difference(zeros(a.rows, a.cols))
    if diff is None:
        return None
    i, j, x, _ = diff
    return {"row": i + 1, "col": j + 1, "value": x}


def check_commute(g: Graph, k: int) -> CommuteResult:
    tg, tbar = token_graph(g, k), token_graph(complement(g), k)
    lw = _commutator_witness(tg.laplacian(), tbar.laplacian())
    aw = _commutator_witness(tg.adjacency(), tbar.adjacency())
    return CommuteResult(lw is None, aw is None, lw, aw)


@dataclass(frozen=True)
class PairRow:
    level: int
    index: int
    lam: object
    lambar: object
    level_value: int

    def holds(self, tol: float) -> bool:
        s = self.lam + self.lambar
        if isinstance(self.lam, (int, Fraction)) and isinstance(self.lambar, (int, Fraction)):
            return s == self.level_value
        return abs(float(s) - self.level_value) <= 2 * tol


@dataclass(frozen=True)
class PairTable:
    """Level-wise pairing of the token spectra of ``G`` and its complement.

    Level ``j`` holds the ``C(n,j) - C(n,j-1)`` eigenvalues new to ``F_j``;
    ``lam`` ascends and ``lambar`` descends within a level.
    """

    n: int
    k: int
    rows: tuple[PairRow, ...]
    exact: bool
    tol: float
    min_gap: float | None = None

    def level(self, j: int) -> list[PairRow]:
        return [r for r in self.rows if r.level == j]

    def violations(self) -> list[PairRow]:
        return [r for r in self.rows if not r.holds(self.tol)]

    @property
    def holds(self) -> bool:
        return not self.violations()

    def pair_multiset(self) -> list[tuple]:
        return sorted(((r.lam, r.lambar) for r in self.rows), key=lambda p: (float(p[0]), float(p[1])))

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "exact": self.exact,
            "holds": self.holds,
            "rows": [_row_json(r) for r in self.rows],
        }
        if not self.exact:
            out["tol"] = self.tol
            out["min_gap"] = self.min_gap
        return out

    def csv_rows(self) -> list[list]:
        header = ["level", "index", "lambda", "lambda_complement", "level_value"]
        return [header] + [list(_row_json(r).values()) for r in self.rows]


def _enc(v):
    return str(v) if isinstance(v, (int, Fraction)) else float(v)


def _row_json(r: PairRow) -> dict:
    return {"level": r.level, "index": r.index, "lambda": _enc(r.lam), "lambda_complement": _enc(r.lambar),
            "level_value": r.level_value}


def _min_gap(specs: Sequence[Spectrum]) -> float | None:
    gaps = []
    for s in specs:
        vals = [float(v) for v in s.distinct()]
        gaps += [b - a for a, b in zip(vals, vals[1:])]
    return min(gaps) if gaps else None


class PairingError(ArithmeticError):
    pass


def pairing_table(g: Graph, k: int, mode: str = "auto", tol: float = PAIRING_TOL) -> PairTable:
    """Pair the new eigenvalues of ``F_j(G)`` and ``F_j(complement G)`` level by level, ``j = 0..k``."""
    n = g.n
    if not 1 <= k <= n // 2:
        raise ValueError(f"pairing needs 1 <= k <= n/2, got n={n}, k={k}")
    gbar = complement(g)
    spec_mode = "exact" if mode == "exact" else mode
    prev = prevbar = None
    rows: list[PairRow] = []
    specs = []
    for j in range(k + 1):
        s = spectrum(token_graph(g, j).laplacian(), spec_mode, DEFAULT_TOL)
        sbar = spectrum(token_graph(gbar, j).laplacian(), spec_mode, DEFAULT_TOL)
        specs += [s, sbar]
        try:
            lev = s if prev is None else spectrum_diff(s, prev)
            levbar = sbar if prevbar is None else spectrum_diff(sbar, prevbar)
        except ValueError as exc:
            raise PairingError(f"level {j}: {exc}") from None
        want = binom(n, j) - binom(n, j - 1)
        if lev.size != want or levbar.size != want:
            raise PairingError(f"level {j} has sizes {lev.size}, {levbar.size}; expected {want}")
        lam = lev.values()
        lambar = sorted(levbar.values(), reverse=True)
        target = j * (n + 1 - j)
        rows += [PairRow(j, r + 1, a, b, target) for r, (a, b) in enumerate(zip(lam, lambar))]
        prev, prevbar = s, sbar
    exact = all(sp.exact for sp in specs)
    return PairTable(n, k, tuple(rows), exact, tol, None if exact else _min_gap(specs))


# ----------------------------------------------------------------------
# local algebra


def _scale_to_integers(m: ExactMatrix) -> tuple[ExactMatrix, int]:
    """``(s*M, s)`` with ``s`` the least common denominator of the entries."""
    s = reduce(lcm, (x.denominator for x in m.array.flat if isinstance(x, Fraction)), 1)
    return (m * s if s != 1 else m), s


@dataclass
class LocalAlgebraReport:
    n: int
    k: int
    dim: int
    joint: JointSpectrum
    alpha: Fraction
    beta: Fraction
    R: ExactMatrix
    thetas: tuple
    idempotents: tuple
    checks: Report
    monomial_rank: int
    pairing_discrepancy: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def to_json(self) -> dict:
        exact = self.joint.mode == "exact"
        return {
            "n": self.n,
            "k": self.k,
            "dim": self.dim,
            "pairs": self.joint.to_json(),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "R": self.R.to_json(),
            "R_eigenvalues": [_enc(t) for t in self.thetas],
            "idempotents": [e.to_json() if exact else np.asarray(e).tolist() for e in self.idempotents],
            "monomial_rank": self.monomial_rank,
            "pairing_discrepancy": self.pairing_discrepancy,
            "checks": self.checks.to_json(),
            **({"notes": self.notes} if self.notes else {}),
        }


def _monomial_rank(l1: ExactMatrix, l2: ExactMatrix, top: int) -> int:
    """Rank of ``{l1^a l2^b : a + b <= top}``."""
    p1 = [identity(l1.rows)]
    p2 = [identity(l1.rows)]
    for _ in range(top):
        p1.append(p1[-1] @ l1)
        p2.append(p2[-1] @ l2)
    mons = [p1[a] @ p2[b] for a in range(top + 1) for b in range(top + 1 - a)]
    return rank(stack_vectorized(mons))


def _pair_discrepancy(table: PairTable, js: JointSpectrum) -> dict | None:
    joint = sorted(((a, b) for a, b, m in js.pairs for _ in range(m)), key=lambda p: (float(p[0]), float(p[1])))
    paired = table.pair_multiset()
    if table.exact and js.mode == "exact":
        if Counter(joint) == Counter(paired):
            return None
    elif len(joint) == len(paired) and all(
        abs(float(a) - float(c)) <= 1e-6 and abs(float(b) - float(d)) <= 1e-6 for (a, b), (c, d) in zip(joint, paired)
    ):
        return None
    only_joint = Counter(joint) - Counter(paired)
    only_table = Counter(paired) - Counter(joint)
    return {
        "joint_only": [[_enc(a), _enc(b), m] for (a, b), m in sorted(only_joint.items())],
        "pairing_only": [[_enc(a), _enc(b), m] for (a, b), m in sorted(only_table.items())],
    }


def local_algebra(
    g: Graph,
    k: int,
    alpha=None,
    beta=None,
    mode: str = "auto",
    tol: float = DEFAULT_TOL,
) -> LocalAlgebraReport:
    """Dimension, generator ``R = alpha L_k + beta L_k(complement)``, its idempotents and
    the Johnson-subalgebra membership for ``F_k(G)``.

    ``alpha`` defaults to 1 and ``beta`` to the separating weight found for the
    joint spectrum.  Raises :class:`NotCommutingError` if the Laplacians do not commute.
    """
    n = g.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    lk = token_graph(g, k).laplacian()
    lbar = token_graph(complement(g), k).laplacian()
    if not commutator_is_zero(lk, lbar):
        raise NotCommutingError("L_k(G) and L_k(complement G) do not commute")
    rep = Report(f"local algebra n={n} k={k}")
    notes = []
    js = joint_spectrum(lk, lbar, mode, tol)
    dim = len(js.pairs)
    size = binom(n, k)
    kk = min(k, n - k)
    rep.add(Check("k+1 <= dim <= C(n,k)", kk + 1 <= dim <= size, None if kk + 1 <= dim <= size else {"dim": dim}))

    mrank = _monomial_rank(lk, lbar, dim)
    rep.add(Check("monomial rank = pair count", mrank == dim, None if mrank == dim else {"rank": mrank, "pairs": dim}))

    alpha = Fraction(1) if alpha is None else Fraction(as_scalar(alpha))
    beta = js.beta if beta is None else Fraction(as_scalar(beta))
    r = lk * alpha + lbar * beta
    s_mat, scale = _scale_to_integers(r)
    thetas = sorted(set(as_scalar(alpha * a + beta * b) for a, b in js.distinct_pairs())) if js.mode == "exact" else \
        _distinct_floats([float(alpha) * float(a) + float(beta) * float(b) for a, b in js.distinct_pairs()], 10 * tol)
    if js.mode != "exact":
        notes.append(f"numeric joint spectrum; min candidate gap {js.min_gap}")
    rep.add(Check("R has d+1 distinct eigenvalues", len(thetas) == dim,
                  None if len(thetas) == dim else {"distinct": len(thetas), "pairs": dim}))

    powers = [identity(size)]
    for _ in range(dim):
        powers.append(powers[-1] @ s_mat)
    basis_rank = rank(stack_vectorized(powers[:dim]))
    closure_rank = rank(stack_vectorized(powers))
    rep.add(Check("{I, R, ..., R^d} independent", basis_rank == dim, None if basis_rank == dim else {"rank": basis_rank}))
    rep.add(Check("R^(d+1) in span{I, ..., R^d}", closure_rank == basis_rank,
                  None if closure_rank == basis_rank else {"rank": closure_rank}))

    if js.mode == "exact":
        idem = _exact_idempotents(s_mat, [t * scale for t in thetas])
        _check_idempotents_exact(rep, idem, thetas, r)
    else:
        idem = _float_idempotents(r.to_float(), [float(t) for t in thetas])
        _check_idempotents_float(rep, idem, thetas, r.to_float(), PAIRING_TOL)

    lj = lk + lbar
    jg = token_graph(complete_graph(n), k).graph
    rep.add(matrix_check("L_k + L_k(complement) = L_J", lj, laplacian(jg)))
    aj = identity(size) * (kk * (n - kk)) - lj
    rep.add(matrix_check("A_J = k(n-k) I - L_J", aj, adjacency(jg)))
    ok = in_span(aj, powers[:dim])
    rep.add(Check("A_J in span{I, R, ..., R^d}", ok))

    discrepancy = None
    if k <= n // 2:
        table = pairing_table(g, k, mode)
        rep.add(Check("pairing law", table.holds, None if table.holds else {"rows": [_row_json(x) for x in table.violations()]}))
        discrepancy = _pair_discrepancy(table, js)
        if discrepancy is not None:
            notes.append("pairing-table pairs differ from joint-spectrum pairs")
    return LocalAlgebraReport(n, k, dim, js, alpha, beta, r, tuple(thetas), tuple(idem), rep, mrank, discrepancy, notes)


def _distinct_floats(vals, tol):
    out = []
    for v in sorted(vals):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


def _exact_idempotents(s_mat: ExactMatrix, thetas: Sequence) -> list[ExactMatrix]:
    """Lagrange products ``prod_{j != i} (S - t_j I) / prod_{j != i} (t_i - t_j)``."""
    eye = identity(s_mat.rows)
    factors = [s_mat - eye * t for t in thetas]
    out = []
    for i, ti in enumerate(thetas):
        num = eye
        den = 1
        for j, tj in enumerate(thetas):
            if j != i:
                num = num @ factors[j]
                den *= ti - tj
        out.append(num * (1 / Fraction(den)))
    return out


def _check_idempotents_exact(rep: Report, idem, thetas, r: ExactMatrix) -> None:
    size = r.rows
    total = zeros(size, size)
    weighted = zeros(size, size)
    for e, t in zip(idem, thetas):
        total = total + e
        weighted = weighted + e * t
    rep.add(matrix_check("sum E_i = I", total, identity(size)))
    rep.add(matrix_check("sum theta_i E_i = R", weighted, r))
    bad = None
    for i, e in enumerate(idem):
        if e @ e != e:
            bad = bad or {"i": i, "j": i}
        for j in range(i + 1, len(idem)):
            if not (e @ idem[j]).is_zero():
                bad = bad or {"i": i, "j": j}
    rep.add(Check("E_i E_j = delta_ij E_i", bad is None, bad))


def _float_idempotents(r: np.ndarray, thetas: Sequence[float]) -> list[np.ndarray]:
    eye = np.eye(r.shape[0])
    out = []
    for i, ti in enumerate(thetas):
        e = eye.copy()
        for j, tj in enumerate(thetas):
            if j != i:
                e = e @ (r - tj * eye) / (ti - tj)
        out.append(e)
    return out


def _check_idempotents_float(rep: Report, idem, thetas, r: np.ndarray, tol: float) -> None:
    eye = np.eye(r.shape[0])
    dev_sum = float(np.max(np.abs(sum(idem) - eye)))
    dev_w = float(np.max(np.abs(sum(t * e for t, e in zip(thetas, idem)) - r)))
    dev_p = 0.0
    for i, e in enumerate(idem):
        for j, f in enumerate(idem):
            want = e if i == j else 0.0
            dev_p = max(dev_p, float(np.max(np.abs(e @ f - want))))
    for name, dev in (("sum E_i = I", dev_sum), ("sum theta_i E_i = R", dev_w), ("E_i E_j = delta_ij E_i", dev_p)):
        rep.add(Check(name, dev <= tol, None if dev <= tol else {"max_deviation": dev}, {"tol": tol}))


# ----------------------------------------------------------------------
# global algebra


def _check_edge(n: int, e: Sequence[int]) -> tuple[int, int]:
    e = tuple(sorted(int(x) for x in e))
    if len(e) != 2 or e[0] == e[1] or not (1 <= e[0] and e[1] <= n):
        raise ValueError(f"{e} is not an edge of K_{n}")
    return e


def elementary_adjacency(n: int, k: int, e: Sequence[int]) -> ExactMatrix:
    """Adjacency matrix of ``F_k(K_n(e))``: a matching on the k-subsets split by ``e``."""
    e = _check_edge(n, e)
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return token_graph(elementary_graph(n, e), k).adjacency()


def elementary_laplacian(n: int, k: int, e: Sequence[int]) -> ExactMatrix:
    a = elementary_adjacency(n, k, e)
    return a @ a - a


@dataclass
class GlobalAlgebraReport:
    n: int
    k: int
    elementary: dict
    dim: int
    checks: Report
    noncommuting_witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "dim": self.dim,
            "expected_dim": binom(self.n, 2),
            "noncommuting_witness": self.noncommuting_witness,
            "checks": self.checks.to_json(),
        }


def global_algebra(n: int, k: int) -> GlobalAlgebraReport:
    """Build every ``A_e`` and certify that they span a ``C(n,2)``-dimensional algebra."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    rep = Report(f"global algebra n={n} k={k}")
    edges = list(combinations(range(1, n + 1), 2))
    mats = {e: elementary_adjacency(n, k, e) for e in edges}
    size = binom(n, k)
    want_nnz = 2 * binom(n - 2, k - 1)
    bad_shape = None
    cover = np.zeros((size, size), dtype=int)
    for e, a in mats.items():
        arr = a.array
        nnz = int(sum(1 for x in arr.flat if x != 0))
        if not (a.is_symmetric() and all(x in (0, 1) for x in arr.flat) and nnz == want_nnz):
            bad_shape = bad_shape or {"edge": list(e), "nonzeros": nnz}
        cover += (arr != 0).astype(int)
    rep.add(Check("A_e symmetric 0/1 with 2 C(n-2,k-1) nonzeros", bad_shape is None, bad_shape))
    overlap = np.argwhere(cover > 1)
    wit = None
    if len(overlap):
        i, j = overlap[0]
        wit = {"row": int(i) + 1, "col": int(j) + 1,
               "edges": [list(e) for e, a in mats.items() if a[int(i), int(j)] != 0]}
    rep.add(Check("supports pairwise disjoint", wit is None, wit))
    total = zeros(size, size)
    for a in mats.values():
        total = total + a
    rep.add(matrix_check("sum A_e = A(J(n,k))", total, adjacency(token_graph(complete_graph(n), k).graph)))
    dim = rank(stack_vectorized(mats.values()))
    rep.add(Check("dim = C(n,2)", dim == len(edges), None if dim == len(edges) else {"rank": dim}))
    bad_lap = None
    for e, a in mats.items():
        if a @ a - a != token_graph(elementary_graph(n, e), k).laplacian():
            bad_lap = bad_lap or {"edge": list(e)}
    rep.add(Check("L_e = A_e^2 - A_e", bad_lap is None, bad_lap))
    witness = None
    if len(edges) > 1:
        for e, f in combinations(edges, 2):
            if set(e) & set(f):
                w = _commutator_witness(mats[e], mats[f])
                if w is not None:
                    witness = {"e": list(e), "f": list(f), **w}
                    break
        rep.add(Check("some A_e, A_f with a shared endpoint do not commute", witness is not None))
    return GlobalAlgebraReport(n, k, mats, dim, rep, witness)


# ----------------------------------------------------------------------
# recognition


class NotJohnsonSubgraphError(ValueError):
    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        self.edge = edge
        super().__init__(message)


@dataclass(frozen=True)
class Recognition:
    accepted: bool
    graph: Graph | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.accepted

    def to_json(self) -> dict:
        out: dict = {"accepted": self.accepted}
        if self.graph is not None:
            out["n"] = self.graph.n
            out["edges"] = [list(e) for e in self.graph.edges]
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _edge_classes(s: Graph, n: int, k: int) -> Counter:
    """Count the edges of ``s`` in each class ``E(F_k(K_n(e)))``; raises on non-Johnson edges."""
    size = binom(n, k)
    if s.n != size:
        raise NotJohnsonSubgraphError(f"graph has {s.n} vertices, J({n},{k}) has {size}")
    masks = subset_masks(n, k)[1]
    raw: Counter = Counter()
    for u, v in s.edges:
        d = masks[u - 1] ^ masks[v - 1]
        if bin(d).count("1") != 2:
            raise NotJohnsonSubgraphError(f"edge {{{u},{v}}} is not an edge of J({n},{k})", (u, v))
        raw[d] += 1
    counts: Counter = Counter()
    for d, c in raw.items():
        lo = (d & -d).bit_length() - 1
        counts[(lo, d.bit_length() - 1)] = c
    return counts


def recognize_token_graph(s: Graph, n: int, k: int) -> Recognition:
    """Accept ``s`` iff its edges are a union of whole classes; then ``s = F_k(H)``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    counts = _edge_classes(s, n, k)
    full = binom(n - 2, k - 1)
    for e in sorted(counts):
        if counts[e] != full:
            return Recognition(False, None, {"edge_class": list(e), "present": counts[e], "class_size": full})
    h = Graph(n, tuple(sorted(counts)))
    if token_graph(h, k).graph != s:
        raise ArithmeticError("recognized graph does not rebuild the input")
    return Recognition(True, h)


def johnson_complement(s: Graph, n: int, k: int) -> Graph:
    """Edges of J(n,k) missing from ``s``."""
    _edge_classes(s, n, k)
    es = s.edge_set
    j = token_graph(complete_graph(n), k).graph
    return Graph(j.n, tuple(e for e in j.edges if e not in es))


@dataclass(frozen=True)
class CommuteTokenReport:
    commutes: bool
    recognized: bool
    recognition: Recognition
    commutator_witness: dict | None = None

    @property
    def agree(self) -> bool:
        return self.commutes == self.recognized

    def to_json(self) -> dict:
        return {
            "commutes": self.commutes,
            "recognized": self.recognized,
            "agree": self.agree,
            "recognition": self.recognition.to_json(),
            "commutator_witness": self.commutator_witness,
        }


def commute_iff_token(s: Graph, n: int, k: int) -> CommuteTokenReport:
    """Run the commutation test of ``L(s)`` with ``L`` of its complement in J(n,k), and
    recognition, independently."""
    rec = recognize_token_graph(s, n, k)
    sbar = johnson_complement(s, n, k)
    w = _commutator_witness(laplacian(s), laplacian(sbar))
    return CommuteTokenReport(w is None, rec.accepted, rec, w)
