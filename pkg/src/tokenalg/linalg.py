"""Dense exact linear algebra over the rationals.

Entries are stored in numpy object arrays holding Python ``int`` whenever
the value is integral and :class:`fractions.Fraction` otherwise.  Keeping
integers as plain ``int`` matters: integer matrix products run roughly two
orders of magnitude faster than the same products over ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]


def as_scalar(x) -> Scalar:
    """Canonical exact scalar: ``int`` if integral, reduced ``Fraction`` otherwise."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, Rational):
        return as_scalar(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return as_scalar(Fraction(x))
    raise TypeError(f"not an exact rational: {x!r} ({type(x).__name__})")


def exact_div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
    return as_scalar(Fraction(a) / b)


def fraction_str(x: Scalar) -> str:
    """``"p/q"`` in lowest terms with a positive denominator."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _normalize(a: np.ndarray) -> np.ndarray:
    flat = a.reshape(-1)
    for i, x in enumerate(flat):
        if type(x) is not int:
            flat[i] = as_scalar(x)
    return a


class ShapeError(ValueError):
    pass


class ExactMatrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(entries, dtype=object)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ShapeError(f"expected a non-empty 2-d array, got shape {a.shape}")
        self._a = _normalize(a.copy())
        self._a.flags.writeable = False

    @classmethod
    def _wrap(cls, a: np.ndarray, normalize: bool = True) -> "ExactMatrix":
        m = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=object)
        m._a = _normalize(a) if normalize else a
        m._a.flags.writeable = False
        return m

    # -- shape ---------------------------------------------------------
    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def array(self) -> np.ndarray:
        """Read-only object array view."""
        return self._a

    # -- element access ------------------------------------------------
    def __getitem__(self, idx):
        return self._a[idx]

    def to_lists(self) -> list[list[Scalar]]:
        return [list(r) for r in self._a]

    def vec(self) -> tuple[Scalar, ...]:
        """Row-major vectorization."""
        return tuple(self._a.reshape(-1))

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._a], dtype=float)

    # -- predicates ----------------------------------------------------
    def is_symmetric(self) -> bool:
        return self.is_square and bool(np.all(self._a == self._a.T))

    def is_integral(self) -> bool:
        return all(type(x) is int for x in self._a.flat)

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self._a.flat)

    def trace(self) -> Scalar:
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        return as_scalar(sum(self._a[i, i] for i in range(self.rows)))

    # -- arithmetic ----------------------------------------------------
    def _check_same(self, other: "ExactMatrix") -> None:
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._wrap(self._a + other._a)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check_same(other)
        return ExactMatrix._wrap(self._a - other._a)

    def __neg__(self):
        return ExactMatrix._wrap(-self._a)

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix._wrap(self._a.dot(other._a))

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        c = as_scalar(c)
        return ExactMatrix._wrap(self._a * c)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "ExactMatrix":
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        if e < 0:
            raise ValueError("negative matrix power")
        result = identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix._wrap(self._a.T.copy(), normalize=False)

    def apply(self, v: Sequence) -> tuple[Scalar, ...]:
        """Matrix-vector product with an exact vector."""
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        w = self._a.dot(np.array([as_scalar(x) for x in v], dtype=object))
        return tuple(as_scalar(x) for x in w)

    # -- comparison ----------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.shape, self.vec()))

    def first_difference(self, other: "ExactMatrix"):
        """First ``(i, j, mine, theirs)`` where the matrices differ, or ``None``."""
        self._check_same(other)
        diff = np.argwhere(self._a != other._a)
        if len(diff) == 0:
            return None
        i, j = (int(t) for t in diff[0])
        return i, j, self._a[i, j], other._a[i, j]

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self._a)
        return f"ExactMatrix([{body}])"

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [fraction_str(x) for x in self._a.flat],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ExactMatrix":
        rows, cols = obj["rows"], obj["cols"]
        entries = [as_scalar(Fraction(s)) for s in obj["entries"]]
        if len(entries) != rows * cols:
            raise ShapeError("entry count does not match rows*cols")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)])


# ----------------------------------------------------------------------
# constructors and elementwise helpers


def identity(n: int) -> ExactMatrix:
    a = np.zeros((n, n), dtype=object)
    a[:] = 0
    for i in range(n):
        a[i, i] = 1
    return ExactMatrix._wrap(a, normalize=False)


def zeros(rows: int, cols: int) -> ExactMatrix:
    a = np.empty((rows, cols), dtype=object)
    a[:] = 0
    return ExactMatrix._wrap(a, normalize=False)


def all_ones(rows: int, cols: int) -> ExactMatrix:
    a = np.empty((rows, cols), dtype=object)
    a[:] = 1
    return ExactMatrix._wrap(a, normalize=False)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def mat_add(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a + b


def mat_sub(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a - b


def scalar_mul(c, a: ExactMatrix) -> ExactMatrix:
    return a * c


def transpose(a: ExactMatrix) -> ExactMatrix:
    return a.T


def hstack(*mats: ExactMatrix) -> ExactMatrix:
    return ExactMatrix._wrap(np.hstack([m.array for m in mats]), normalize=False)


def vstack(*mats: ExactMatrix) -> ExactMatrix:
    return ExactMatrix._wrap(np.vstack([m.array for m in mats]), normalize=False)


def stack_vectorized(mats: Iterable[ExactMatrix]) -> ExactMatrix:
    """One row per matrix, holding its row-major vectorization."""
    return ExactMatrix([m.vec() for m in mats])


def commutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if not (a.is_square and a.shape == b.shape):
        raise ShapeError(f"commutator needs equal square shapes, got {a.shape}, {b.shape}")
    return a @ b - b @ a


def commutator_is_zero(a: ExactMatrix, b: ExactMatrix) -> bool:
    return commutator(a, b).is_zero()


# ----------------------------------------------------------------------
# polynomials


class RatPoly:
    """Univariate polynomial with exact rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_scalar(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Scalar, ...] = tuple(c)

    @classmethod
    def x(cls) -> "RatPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "RatPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_scalar(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RatPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = exact_div(c, lead)
            quot[i - dq] = f
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= f * b
        return RatPoly(quot), RatPoly(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatPoly((other,))
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "RatPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"({c}){'*' + mono if mono else ''}")
        return "RatPoly(" + " + ".join(terms) + ")"

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj: list[str]) -> "RatPoly":
        return cls(Fraction(s) for s in obj)


def _as_poly(p) -> RatPoly:
    if isinstance(p, RatPoly):
        return p
    return RatPoly((p,))


def poly_divides(p: RatPoly, q: RatPoly) -> bool:
    """True iff ``p`` divides ``q`` exactly over the rationals."""
    if p.is_zero():
        raise ZeroDivisionError("zero polynomial as divisor")
    return (q % p).is_zero()


# ----------------------------------------------------------------------
# characteristic polynomial, rank, nullspace


def char_poly(m: ExactMatrix) -> RatPoly:
    """``det(xI - M)`` by the Faddeev-LeVerrier recurrence.

    For integer ``M`` every intermediate matrix and coefficient stays
    integral, so the division by ``k`` is exact integer division.
    """
    if not m.is_square:
        raise ShapeError("characteristic polynomial of a non-square matrix")
    n = m.rows
    a = m.array
    eye = identity(n).array
    coeffs: list[Scalar] = [0] * (n + 1)
    coeffs[n] = 1
    mk = np.zeros((n, n), dtype=object)
    mk[:] = 0
    c_prev: Scalar = 1
    for k in range(1, n + 1):
        mk = a.dot(mk) + eye * c_prev
        am = a.dot(mk)
        tr = as_scalar(sum(am[i, i] for i in range(n)))
        c_prev = exact_div(-tr, k)
        coeffs[n - k] = c_prev
    return RatPoly(coeffs)


def _integer_rows(a: np.ndarray) -> np.ndarray:
    """Scale every row by the lcm of its denominators (row space unchanged)."""
    out = a.copy()
    for i in range(out.shape[0]):
        dens = [x.denominator for x in out[i] if isinstance(x, Fraction)]
        if dens:
            s = lcm(*dens)
            out[i] = [as_scalar(x * s) for x in out[i]]
    return out


def rank(m: ExactMatrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    a = _integer_rows(m.array)
    rows, cols = a.shape
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        column = a[r:, c]
        nz = [i for i, x in enumerate(column) if x != 0]
        if not nz:
            continue
        p = r + nz[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if r + 1 < rows:
            if c + 1 < cols:
                sub = a[r + 1:, c + 1:]
                a[r + 1:, c + 1:] = (sub * piv - np.outer(a[r + 1:, c], a[r, c + 1:])) // prev
            a[r + 1:, c] = 0
        prev = piv
        r += 1
    return r


def nullity(m: ExactMatrix) -> int:
    return m.cols - rank(m)


def nullspace(m: ExactMatrix) -> list[tuple[Scalar, ...]]:
    """Basis of the right nullspace, from the reduced row echelon form."""
    a = [[Fraction(x) for x in row] for row in m.array]
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fcol]
        basis.append(tuple(as_scalar(x) for x in v))
    return basis


# ----------------------------------------------------------------------
# evaluation


def eval_matrix_poly(p: RatPoly, m: ExactMatrix) -> ExactMatrix:
    """``p(M)`` by Horner's rule."""
    if not m.is_square:
        raise ShapeError("polynomial of a non-square matrix")
    n = m.rows
    eye = identity(n)
    if p.is_zero():
        return zeros(n, n)
    acc = eye * p.leading
    for c in reversed(p.coeffs[:-1]):
        acc = acc @ m + eye * c
    return acc


def eval_bivariate_monomials(a: int, b: int, m1: ExactMatrix, m2: ExactMatrix) -> ExactMatrix:
    """``M1**a @ M2**b``; commutation is not assumed."""
    if not (m1.is_square and m1.shape == m2.shape):
        raise ShapeError(f"monomials need equal square shapes, got {m1.shape}, {m2.shape}")
    return (m1 ** a) @ (m2 ** b)


def in_span(target: ExactMatrix, basis: Sequence[ExactMatrix]) -> bool:
    """Whether ``target`` is a linear combination of ``basis`` (rank test)."""
    base = stack_vectorized(basis)
    return rank(vstack(base, stack_vectorized([target]))) == rank(base)
