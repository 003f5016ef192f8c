"""Spectra of symmetric matrices: exact when integral, numeric with exact snapping otherwise."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .linalg import (
    ExactMatrix,
    RatPoly,
    Scalar,
    as_scalar,
    char_poly,
    commutator_is_zero,
    fraction_str,
    identity,
    nullity,
    rank,
    stack_vectorized,
)

Value = Union[int, Fraction, float]

DEFAULT_TOL = 1e-9
SNAP_TOL = 1e-6
MAX_SEPARATION_DENOMINATOR = 10 ** 6


class NotCommutingError(ValueError):
    pass


class SeparationError(RuntimeError):
    pass


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class Spectrum:
    """Sorted ``(eigenvalue, multiplicity)`` pairs.

    ``mode`` is ``"exact"`` (all values int/Fraction) or ``"approximate"``;
    approximate spectra may still carry exact values for verified snaps.
    """

    entries: tuple[tuple[Value, int], ...]
    mode: str = "exact"
    tol: float | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "approximate"):
            raise ValueError(f"unknown spectrum mode {self.mode!r}")
        for (a, ma), (b, _) in zip(self.entries, self.entries[1:]):
            if not a < b:
                raise ValueError(f"eigenvalues not strictly increasing: {a} then {b}")
        if any(m < 1 for _, m in self.entries):
            raise ValueError("multiplicities must be positive")
        if self.mode == "exact" and not all(_is_exact(v) for v, _ in self.entries):
            raise ValueError("exact spectrum with non-exact value")

    @classmethod
    def from_values(cls, values: Iterable[Value], mode: str = "exact", tol: float | None = None) -> "Spectrum":
        values = list(values)
        if mode == "exact":
            counts = Counter(as_scalar(v) for v in values)
            return cls(tuple(sorted(counts.items())), "exact")
        tol = DEFAULT_TOL if tol is None else tol
        return cls(_cluster(sorted(values), tol), "approximate", tol)

    @property
    def size(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return self.size

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    def values(self) -> list[Value]:
        """All eigenvalues, ascending, repeated by multiplicity."""
        return [v for v, m in self.entries for _ in range(m)]

    def distinct(self) -> list[Value]:
        return [v for v, _ in self.entries]

    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v, _ in self.entries)

    @property
    def algebraic_connectivity(self) -> Value:
        vals = self.values()
        if len(vals) < 2:
            raise ValueError("algebraic connectivity needs at least two eigenvalues")
        return vals[1]

    def total(self) -> Value:
        return sum(v * m for v, m in self.entries)

    def matches(self, other: "Spectrum", tol: float | None = None) -> bool:
        """Multiset equality; tolerance-based unless both are exact."""
        if self.exact and other.exact:
            return self.entries == other.entries
        tol = tol if tol is not None else max(self.tol or 0.0, other.tol or 0.0, DEFAULT_TOL)
        a, b = self.values(), other.values()
        return len(a) == len(b) and all(abs(float(x) - float(y)) <= tol for x, y in zip(a, b))

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "entries": [[fraction_str(v) if _is_exact(v) else float(v), m] for v, m in self.entries],
        }
        if self.tol is not None:
            out["tol"] = self.tol
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Spectrum":
        entries = tuple(
            (as_scalar(Fraction(v)) if isinstance(v, str) else float(v), int(m)) for v, m in obj["entries"]
        )
        return cls(entries, obj["mode"], obj.get("tol"))

    def __repr__(self):
        body = ", ".join(f"{v}^{m}" if m > 1 else f"{v}" for v, m in self.entries)
        return f"Spectrum({{{body}}}, {self.mode})"


def _cluster(values: Sequence[float], tol: float) -> tuple[tuple[float, int], ...]:
    out: list[list] = []
    for v in values:
        if out and abs(v - out[-1][2]) <= tol:
            out[-1][0].append(v)
            out[-1][2] = v
        else:
            out.append([[v], None, v])
    return tuple((float(np.mean(c[0])), len(c[0])) for c in out)


def _require_symmetric(m: ExactMatrix) -> None:
    if not m.is_symmetric():
        raise ValueError("matrix is not symmetric")


def gershgorin_bound(m: ExactMatrix) -> Scalar:
    return max(sum(abs(x) for x in row) for row in m.array)


# ----------------------------------------------------------------------
# exact and numeric spectra


def exact_spectrum(m: ExactMatrix) -> Spectrum | None:
    """Exact spectrum if the characteristic polynomial splits over the integers, else ``None``.

    Integer roots are found by divisor search on the constant term of the
    deflated polynomial, restricted to the Gershgorin interval.
    """
    _require_symmetric(m)
    p = char_poly(m)
    if not all(isinstance(c, int) for c in p.coeffs):
        return None
    counts: Counter = Counter()
    x = RatPoly.x()
    while p.degree > 0 and p.coeffs[0] == 0:
        p = p // x
        counts[0] += 1
    bound = floor(gershgorin_bound(m))
    for r in range(-bound, bound + 1):
        if p.degree <= 0:
            break
        if r == 0 or p.coeffs[0] % r:
            continue
        lin = RatPoly((-r, 1))
        while p.degree > 0:
            q, rem = divmod(p, lin)
            if not rem.is_zero():
                break
            p = q
            counts[r] += 1
    if p.degree != 0:
        return None
    return Spectrum(tuple(sorted(counts.items())), "exact")


def numeric_spectrum(m: ExactMatrix, tol: float = DEFAULT_TOL, snap_tol: float = SNAP_TOL) -> Spectrum:
    """LAPACK eigenvalues grouped at ``tol``; near-integers are snapped only when
    ``nullity(M - rI)`` equals the cluster size exactly (for symmetric ``M`` this is
    the algebraic multiplicity of ``r``)."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    _require_symmetric(m)
    w = np.linalg.eigvalsh(m.to_float())
    clusters = _cluster(sorted(w.tolist()), tol)
    entries: list[tuple[Value, int]] = []
    eye = identity(m.rows)
    for value, mult in clusters:
        r = round(value)
        if abs(value - r) <= snap_tol and nullity(m - eye * r) == mult:
            entries.append((int(r), mult))
        else:
            entries.append((value, mult))
    return Spectrum(tuple(entries), "approximate", tol)


def spectrum(m: ExactMatrix, mode: str = "auto", tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum by ``mode``: ``exact`` (char poly, raises if not integral),
    ``numeric``, or ``auto`` (numeric, promoted to exact when every eigenvalue
    snapped to a verified integer)."""
    if mode == "exact":
        s = exact_spectrum(m)
        if s is None:
            raise ValueError("spectrum is not integral; use numeric or auto mode")
        return s
    s = numeric_spectrum(m, tol)
    if mode == "numeric":
        return s
    if mode != "auto":
        raise ValueError(f"unknown mode {mode!r}")
    if s.is_integral() and s.size == m.rows:
        return Spectrum(s.entries, "exact")
    return s


def spectrum_diff(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """Multiset difference ``s1 - s2``; raises if ``s2`` is not contained in ``s1``."""
    if s1.exact and s2.exact:
        c = Counter(dict(s1.entries))
        for v, m in s2.entries:
            if c[v] < m:
                raise ValueError(f"eigenvalue {v} (x{m}) not contained in minuend")
            c[v] -= m
        return Spectrum(tuple(sorted((v, m) for v, m in c.items() if m)), "exact")
    tol = max(s1.tol or 0.0, s2.tol or 0.0, DEFAULT_TOL)
    remaining = [[v, m] for v, m in s1.entries]
    for v, m in s2.entries:
        need = m
        for slot in remaining:
            if need and slot[1] and abs(float(slot[0]) - float(v)) <= tol:
                take = min(need, slot[1])
                slot[1] -= take
                need -= take
        if need:
            raise ValueError(f"eigenvalue {v} (x{m}) not contained in minuend")
    return Spectrum(tuple((v, m) for v, m in remaining if m), "approximate", tol)


# ----------------------------------------------------------------------
# joint spectra of commuting symmetric pairs


@dataclass(frozen=True)
class JointSpectrum:
    """Common eigenvalue pairs ``(lam, lambar, multiplicity)`` of a commuting pair.

    ``beta`` is the separating weight used for ``M1 + beta*M2``; ``min_gap`` the
    smallest separation between candidate combined values (numeric path).
    """

    pairs: tuple[tuple[Value, Value, int], ...]
    beta: Fraction
    mode: str
    min_gap: float | None = None

    @property
    def size(self) -> int:
        return sum(m for _, _, m in self.pairs)

    def project(self, which: int) -> Spectrum:
        vals = [p[which] for p in self.pairs for _ in range(p[2])]
        if self.mode == "exact":
            return Spectrum.from_values(vals, "exact")
        return Spectrum.from_values([float(v) for v in vals], "approximate")

    def distinct_pairs(self) -> list[tuple[Value, Value]]:
        return [(a, b) for a, b, _ in self.pairs]

    def evaluate(self, f: Callable[[Value, Value], Value]) -> Spectrum:
        """Spectrum of ``f(M1, M2)`` predicted from the pairs."""
        vals = [f(a, b) for a, b, m in self.pairs for _ in range(m)]
        if self.mode == "exact":
            return Spectrum.from_values(vals, "exact")
        return Spectrum.from_values([float(v) for v in vals], "approximate")

    def to_json(self) -> dict:
        def enc(v):
            return fraction_str(v) if _is_exact(v) else float(v)

        out = {
            "mode": self.mode,
            "beta": fraction_str(self.beta),
            "pairs": [[enc(a), enc(b), m] for a, b, m in self.pairs],
        }
        if self.min_gap is not None:
            out["min_gap"] = self.min_gap
        return out


def separating_t(candidates: Sequence[tuple[Value, Value]], min_sep: float = 0.0) -> int:
    """Smallest ``t >= 1`` with ``a + b/t`` pairwise distinct over the candidates.

    Exact candidates need plain distinctness; float candidates need gaps above ``min_sep``.
    """
    exact = all(_is_exact(a) and _is_exact(b) for a, b in candidates)
    for t in range(1, MAX_SEPARATION_DENOMINATOR + 1):
        if exact:
            if len({t * a + b for a, b in candidates}) == len(candidates):
                return t
        else:
            vals = sorted(float(a) + float(b) / t for a, b in candidates)
            if all(y - x > min_sep for x, y in zip(vals, vals[1:])):
                return t
    raise SeparationError(f"no separating weight 1/t with t <= {MAX_SEPARATION_DENOMINATOR}")


def joint_spectrum(m1: ExactMatrix, m2: ExactMatrix, mode: str = "auto", tol: float = DEFAULT_TOL) -> JointSpectrum:
    """Pair the eigenvalues of commuting symmetric ``m1``, ``m2`` on common eigenvectors."""
    if not commutator_is_zero(m1, m2):
        raise NotCommutingError("matrices do not commute")
    s1 = spectrum(m1, mode, tol)
    s2 = spectrum(m2, mode, tol)
    if s1.exact and s2.exact:
        js = _joint_exact(m1, m2, s1, s2, tol)
        if js is not None:
            return js
    return _joint_numeric(m1, m2, s1, s2, tol)


def _joint_exact(m1, m2, s1, s2, tol) -> JointSpectrum | None:
    cands = [(a, b) for a in s1.distinct() for b in s2.distinct()]
    t = separating_t(cands)
    decode = {t * a + b: (a, b) for a, b in cands}
    sr = spectrum(m1 * t + m2, "auto", tol)
    if not sr.exact:
        return None
    pairs = []
    for v, mult in sr.entries:
        if v not in decode:
            raise ArithmeticError(f"eigenvalue {v} of the combined matrix matches no candidate pair")
        a, b = decode[v]
        pairs.append((a, b, mult))
    pairs.sort()
    js = JointSpectrum(tuple(pairs), Fraction(1, t), "exact")
    if js.project(0) != s1 or js.project(1) != s2:
        raise ArithmeticError("joint spectrum projections do not reproduce the individual spectra")
    return js


def _joint_numeric(m1, m2, s1, s2, tol) -> JointSpectrum:
    cands = [(float(a), float(b)) for a in s1.distinct() for b in s2.distinct()]
    t = separating_t(cands, 10 * tol)
    vals = sorted(a + b / t for a, b in cands)
    min_gap = min((y - x for x, y in zip(vals, vals[1:])), default=float("inf"))
    f1, f2 = m1.to_float(), m2.to_float()
    w, vecs = np.linalg.eigh(f1 + f2 / t)
    groups: list[list[int]] = []
    for i in np.argsort(w):
        if groups and abs(w[i] - w[groups[-1][-1]]) <= 5 * tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    pairs = []
    for g in groups:
        v = vecs[:, g]
        lam = float(np.mean(np.einsum("ij,ik,kj->j", v, f1, v)))
        lamb = float(np.mean(np.einsum("ij,ik,kj->j", v, f2, v)))
        pairs.append((_snap(lam, s1), _snap(lamb, s2), len(g)))
    pairs = _merge_pairs(pairs, tol)
    js = JointSpectrum(tuple(pairs), Fraction(1, t), "approximate", float(min_gap))
    check_tol = max(100 * tol, 1e-8)
    if not (js.project(0).matches(s1, check_tol) and js.project(1).matches(s2, check_tol)):
        raise ArithmeticError("joint spectrum projections do not reproduce the individual spectra")
    return js


def _snap(x: float, s: Spectrum) -> Value:
    for v, _ in s.entries:
        if isinstance(v, int) and abs(x - v) <= SNAP_TOL:
            return v
    return x


def _merge_pairs(pairs, tol):
    pairs = sorted(pairs, key=lambda p: (float(p[0]), float(p[1])))
    out: list[list] = []
    for a, b, m in pairs:
        if out and abs(float(out[-1][0]) - float(a)) <= 10 * tol and abs(float(out[-1][1]) - float(b)) <= 10 * tol:
            out[-1][2] += m
        else:
            out.append([a, b, m])
    return [tuple(p) for p in out]


def distinct_eigenvalue_count(m: ExactMatrix) -> int:
    """Exact count of distinct eigenvalues of symmetric ``m``: the dimension of
    ``span{I, M, M^2, ...}``, grown until a power adds nothing new."""
    _require_symmetric(m)
    powers = [identity(m.rows)]
    while len(powers) <= m.rows:
        powers.append(powers[-1] @ m)
        if rank(stack_vectorized(powers)) < len(powers):
            return len(powers) - 1
    return m.rows
