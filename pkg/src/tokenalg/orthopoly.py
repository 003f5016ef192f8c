"""Predistance polynomials, Hoffman-type tests and the distance-regularity test.

A family is orthogonal for ``<f, g> = (1/n) sum_i m_i f(t_i) g(t_i)`` over a
spectrum ``{t_i^m_i}`` and normalized so that ``||p_i||^2 = p_i(anchor)``.
The anchor is the trivial eigenvalue: ``0`` for Laplacian spectra and the
largest eigenvalue for adjacency spectra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .graphs import Graph, adjacency, distance_matrices, distance_table
from .linalg import ExactMatrix, RatPoly, as_scalar, eval_matrix_poly, exact_div, identity
from .spectra import DEFAULT_TOL, Spectrum, spectrum

KINDS = ("adjacency", "laplacian")
NUMERIC_ORTHO_TOL = 1e-7


class DegenerateNormalization(ArithmeticError):
    pass


def scalar_product(kind: str, spec: Spectrum, f, g):
    """``(1/n) sum m_i f(t_i) g(t_i)``; exact on exact spectra."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    n = spec.size
    if spec.exact:
        return exact_div(as_scalar(sum(m * f(t) * g(t) for t, m in spec.entries)), n)
    return float(sum(m * f(float(t)) * g(float(t)) for t, m in spec.entries)) / n


def default_anchor(kind: str, spec: Spectrum):
    if kind == "laplacian":
        return 0
    if kind == "adjacency":
        return spec.distinct()[-1]
    raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class PredistanceFamily:
    kind: str
    spectrum: Spectrum | None
    polys: tuple
    anchor: object = 0
    exact: bool = True
    truncated_at: int | None = None
    moments: tuple = field(default=(), repr=False)

    @property
    def d(self) -> int:
        return len(self.polys) - 1

    @property
    def hoffman_sum(self):
        h = self.polys[0]
        for p in self.polys[1:]:
            h = h + p
        return h

    def inner(self, f, g):
        """The family's scalar product (by spectrum, or by moments when built from a matrix)."""
        if self.spectrum is not None:
            return scalar_product(self.kind, self.spectrum, f, g)
        fc, gc = _coeffs(f), _coeffs(g)
        return as_scalar(sum(a * b * self.moments[i + j] for i, a in enumerate(fc) for j, b in enumerate(gc)))

    def evaluate_at(self, m: ExactMatrix, which: int | None = None):
        """``p_which(M)`` (or ``H(M)`` when ``which`` is None); float array on numeric families."""
        p = self.hoffman_sum if which is None else self.polys[which]
        if self.exact:
            return eval_matrix_poly(p, m)
        return _float_matrix_poly(p, m.to_float())

    def sample_table(self, xs: Sequence[float]) -> list[list[float]]:
        return [[float(x)] + [float(p(x)) for p in self.polys] for x in xs]

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "anchor": str(self.anchor),
            "exact": self.exact,
            "polys": [p.to_json() if self.exact else [float(c) for c in p.coef] for p in self.polys],
            "hoffman_sum": self.hoffman_sum.to_json() if self.exact else [float(c) for c in self.hoffman_sum.coef],
        }
        if self.spectrum is not None:
            out["spectrum"] = self.spectrum.to_json()
        if self.truncated_at is not None:
            out["truncated_at"] = self.truncated_at
        return out


def _coeffs(p):
    return p.coeffs if isinstance(p, RatPoly) else tuple(p.coef)


def _float_matrix_poly(p: Polynomial, a: np.ndarray) -> np.ndarray:
    coef = p.coef
    acc = np.eye(a.shape[0]) * coef[-1]
    for c in coef[-2::-1]:
        acc = acc @ a + np.eye(a.shape[0]) * c
    return acc


def _gram_schmidt(inner, x, one, count, at_anchor, is_zero_norm):
    """Orthogonalize ``1, x*p_0, x*p_1, ...`` (same flag of spans as ``1, x, x^2, ...``)
    and rescale each ``p`` to ``(p(anchor)/||p||^2) p``.

    Returns ``(polys, truncated_at)``; stops early when a norm vanishes.
    """
    ortho = []  # unnormalized orthogonal polys with their squared norms
    polys = []
    for i in range(count):
        p = one if i == 0 else x * ortho[-1][0]
        for q, qq in ortho:
            p = p - q * (inner(p, q) / qq)
        nn = inner(p, p)
        if is_zero_norm(nn):
            break
        ortho.append((p, nn))
        pa = at_anchor(p)
        if is_zero_norm(pa):
            return polys, i
        polys.append(p * (pa / nn))
    return polys, None


def predistance_family(kind: str, spec: Spectrum, anchor=None) -> PredistanceFamily:
    """Gram-Schmidt family for ``spec`` under the spectrum scalar product.

    Exact spectra give ``RatPoly`` members; approximate spectra give float
    ``numpy.polynomial.Polynomial`` members.
    """
    if anchor is None:
        anchor = default_anchor(kind, spec)
    count = len(spec.entries)
    if spec.exact:
        def inner(f, g):
            return scalar_product(kind, spec, f, g)

        polys, trunc = _gram_schmidt(
            lambda f, g: Fraction(inner(f, g)),
            RatPoly.x(), RatPoly.const(1), count,
            lambda p: Fraction(p(anchor)),
            lambda v: v == 0,
        )
        polys = [RatPoly(p.coeffs) for p in polys]
        return PredistanceFamily(kind, spec, tuple(polys), anchor, True, trunc)
    a = float(anchor)
    polys, trunc = _gram_schmidt(
        lambda f, g: scalar_product(kind, spec, f, g),
        Polynomial([0.0, 1.0]), Polynomial([1.0]), count,
        lambda p: float(p(a)),
        lambda v: abs(v) < 1e-13,
    )
    return PredistanceFamily(kind, spec, tuple(polys), anchor, False, trunc)


def moment_predistance_family(m: ExactMatrix, kind: str, anchor) -> PredistanceFamily:
    """Exact family from the trace moments ``tr(M^j)/n`` (no eigenvalues needed).

    Works for irrational spectra as long as ``anchor`` is rational; the number
    of members equals the number of distinct eigenvalues.
    """
    n = m.rows
    moments: list = [1]
    power = identity(n)

    def moment(j):
        nonlocal power
        while len(moments) <= j:
            power = power @ m
            moments.append(exact_div(power.trace(), n))
        return moments[j]

    def inner(f, g):
        fc, gc = f.coeffs, g.coeffs
        moment(len(fc) + len(gc))
        return Fraction(sum(a * b * moments[i + j] for i, a in enumerate(fc) for j, b in enumerate(gc)))

    polys, trunc = _gram_schmidt(
        inner, RatPoly.x(), RatPoly.const(1), n,
        lambda p: Fraction(p(anchor)),
        lambda v: v == 0,
    )
    return PredistanceFamily(kind, None, tuple(RatPoly(p.coeffs) for p in polys), anchor, True, trunc,
                             tuple(moments))


def matrix_predistance_family(m: ExactMatrix, kind: str, mode: str = "auto", tol: float = DEFAULT_TOL) -> PredistanceFamily:
    """Family of a symmetric matrix: exact whenever the anchor is rational."""
    spec = spectrum(m, "numeric" if mode == "numeric" else "auto", tol)
    if spec.exact:
        return predistance_family(kind, spec)
    anchor = default_anchor(kind, spec)
    if mode != "numeric" and isinstance(anchor, int):
        return moment_predistance_family(m, kind, anchor)
    return predistance_family(kind, spec)


# ----------------------------------------------------------------------
# Hoffman-type checks


@dataclass(frozen=True)
class HoffmanResult:
    """Whether ``H(M) = J``; ``deviation`` is the largest ``|H(M) - J|`` entry and its 1-based position."""

    holds: bool
    deviation: object
    position: tuple[int, int] | None
    exact: bool

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        dev = self.deviation
        return {
            "holds": self.holds,
            "max_deviation": str(dev) if isinstance(dev, Fraction) else dev,
            "position": list(self.position) if self.position else None,
            "exact": self.exact,
        }


def _compare_to_ones(h, n: int, exact: bool, tol: float) -> HoffmanResult:
    if exact:
        diff = [[abs(x - 1) for x in row] for row in h.array]
    else:
        diff = np.abs(np.asarray(h, dtype=float) - 1.0).tolist()
    best, pos = 0, None
    for i, row in enumerate(diff):
        for j, x in enumerate(row):
            if x > best:
                best, pos = x, (i + 1, j + 1)
    holds = best == 0 if exact else best <= n * tol
    return HoffmanResult(holds, as_scalar(best) if exact else float(best), pos, exact)


def hoffman_regular_check(g: Graph, mode: str = "auto", tol: float = NUMERIC_ORTHO_TOL) -> HoffmanResult:
    """``H(A) = J`` with ``H`` the sum of adjacency predistance polynomials."""
    a = adjacency(g)
    fam = matrix_predistance_family(a, "adjacency", mode)
    return _compare_to_ones(fam.evaluate_at(a), g.n, fam.exact, tol)


def _check_laplacian_shape(m: ExactMatrix) -> None:
    if not m.is_symmetric():
        raise ValueError("Laplacian must be symmetric")
    for i, row in enumerate(m.array):
        if sum(row) != 0:
            raise ValueError(f"row {i + 1} of the Laplacian does not sum to zero")
        if any(x > 0 for j, x in enumerate(row) if j != i):
            raise ValueError(f"positive off-diagonal entry in row {i + 1}")


def hoffman_connected_check(m: ExactMatrix, mode: str = "auto", tol: float = NUMERIC_ORTHO_TOL) -> HoffmanResult:
    """``H_L(L) = J`` with ``H_L`` the sum of Laplacian predistance polynomials."""
    _check_laplacian_shape(m)
    fam = matrix_predistance_family(m, "laplacian", mode)
    return _compare_to_ones(fam.evaluate_at(m), m.rows, fam.exact, tol)


# ----------------------------------------------------------------------
# distance-regularity


@dataclass(frozen=True)
class DRGReport:
    drg: bool
    d: int
    diameter: int
    checked_by: str
    intersection_array: object = None
    all_distance_polys: bool | None = None
    counting_agrees: bool | None = None

    def to_json(self) -> dict:
        ia = self.intersection_array
        return {
            "drg": self.drg,
            "d": self.d,
            "diameter": self.diameter,
            "checked_by": self.checked_by,
            "intersection_array": ia.to_json() if ia is not None else None,
            "all_distance_polys": self.all_distance_polys,
            "counting_agrees": self.counting_agrees,
        }


def is_distance_regular(g: Graph, full: bool = True) -> DRGReport:
    """Distance-regularity via ``p_d(A) = A_d`` (``d + 1`` distinct eigenvalues, diameter ``d``).

    With ``full``, also checks every ``p_i(A) = A_i`` and extracts the
    intersection array by counting over the distance partition; the two
    verdicts are recorded in ``counting_agrees``.
    """
    from .johnson import count_intersection_array

    dm = distance_matrices(g)
    a = adjacency(g)
    fam = matrix_predistance_family(a, "adjacency")
    d = fam.d
    counted = count_intersection_array(g, distance_table(g)) if full else None
    if dm.diameter != d or not fam.exact:
        drg = False
        how = "diameter != d" if dm.diameter != d else "non-rational anchor (irregular)"
    else:
        drg = fam.evaluate_at(a, d) == dm[d]
        how = "p_d(A) = A_d"
    all_ok = None
    if drg and full:
        all_ok = all(fam.evaluate_at(a, i) == dm[i] for i in range(d + 1))
    agrees = None if not full else (drg == (counted is not None))
    return DRGReport(drg, d, dm.diameter, how, counted if drg else None, all_ok, agrees)


def orthogonality_defect(fam: PredistanceFamily):
    """Largest ``|<p_i, p_j>|`` (i != j) and ``|<p_i,p_i> - p_i(anchor)|``; zero on exact families."""
    worst = 0
    anchor = fam.anchor if fam.exact else float(fam.anchor)
    for i, p in enumerate(fam.polys):
        worst = max(worst, abs(fam.inner(p, p) - p(anchor)))
        for q in fam.polys[i + 1:]:
            worst = max(worst, abs(fam.inner(p, q)))
    return worst
