"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere in the package.  Matrices are small (tens of rows at most), so
plain Gaussian elimination on lists of fractions is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vec(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense rational matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(frac(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RatMatrix":
        return cls.from_rows([list(c) for c in columns], cols=rows).transpose()

    # access

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    # arithmetic

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [other.col(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                out.extend(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols)
            return RatMatrix(self.rows, other.cols, tuple(out))
        v = vec(other)
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0))
                     for i in range(self.rows))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "RatMatrix":
        c = frac(c)
        return RatMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        return len(rref(self)[1])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        m = self.tolist()
        n = self.rows
        d = Fraction(1)
        for k in range(n):
            p = next((i for i in range(k, n) if m[i][k] != 0), None)
            if p is None:
                return Fraction(0)
            if p != k:
                m[k], m[p] = m[p], m[k]
                d = -d
            d *= m[k][k]
            for i in range(k + 1, n):
                f = m[i][k] / m[k][k]
                if f:
                    for j in range(k, n):
                        m[i][j] -= f * m[k][j]
        return d

    def inverse(self) -> "RatMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = RatMatrix.from_rows([list(self.row(i)) + list(RatMatrix.identity(n).row(i))
                                   for i in range(n)], cols=2 * n)
        r, piv = rref(aug)
        if piv[:n] != tuple(range(n)) or (len(piv) > n):
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix.from_rows([r.row(i)[n:] for i in range(n)], cols=n)

    def __repr__(self):
        body = "; ".join(", ".join(fmt(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    a = m.tolist()
    pivots = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [x / lead for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix.from_rows(a, cols=m.cols), tuple(pivots)


def free_column_kernel(m: RatMatrix) -> dict[int, Vector]:
    """Null-space basis indexed by the free columns of ``rref(m)``.

    The vector for free column ``f`` has a 1 in position ``f`` and a 0 in every
    other free position, so the family is dual to the free coordinates.
    """
    r, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    out = {}
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        out[f] = tuple(v)
    return out


def integer_primitive(v: Sequence, positive_lead: bool = True) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers (first nonzero entry positive)."""
    v = vec(v)
    if not any(v):
        return tuple(0 for _ in v)
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if positive_lead and next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel(m: RatMatrix) -> list[tuple[int, ...]]:
    """Null-space basis of ``m``; vectors are primitive integer with positive lead."""
    return [integer_primitive(v) for v in free_column_kernel(m).values()]


def congruence_diagonalize(m: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
    """Return ``(D, P)`` with ``P.T @ m @ P == D`` diagonal and ``P`` invertible."""
    if not m.is_symmetric():
        raise ValueError("congruence diagonalization needs a symmetric matrix")
    n = m.rows
    a = m.tolist()
    p = RatMatrix.identity(n).tolist()  # columns are the new basis vectors

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    def add(i, j, f):
        # basis vector i += f * basis vector j
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        for row in a:
            row[i] += f * row[j]
        for row in p:
            row[i] += f * row[j]

    for k in range(n):
        if a[k][k] == 0:
            j = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((i for i in range(k + 1, n) if a[k][i] != 0), None)
                if j is None:
                    continue
                add(k, j, Fraction(1))  # new pivot is 2*a[k][j] != 0
        for i in range(k + 1, n):
            if a[i][k] != 0:
                add(i, k, -a[i][k] / a[k][k])
    return RatMatrix.from_rows(a, cols=n), RatMatrix.from_rows(p, cols=n)
