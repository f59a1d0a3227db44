"""Exact linear algebra over the rationals.

Rationals are :class:`fractions.Fraction`.  Matrices are immutable and stored
row-major.  Pivoting is deterministic (first nonzero entry, scanning columns
left to right) so reduced forms are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Serialize as ``"num/den"``, dropping the denominator when it is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --- list-level kernels (hot paths use these directly) ---------------------


def rref_rows(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form of a list of rows.

    Returns ``(reduced_rows, pivots)`` where ``reduced_rows`` holds only the
    nonzero rows.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        row = m[r]
        inv = row[c]
        if inv != 1:
            row = [v / inv for v in row]
            m[r] = row
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f != 0:
                    other = m[i]
                    m[i] = [a - f * b for a, b in zip(other, row)]
        pivots.append(c)
        r += 1
    return [tuple(x) for x in m[:r]], pivots


def nullspace_rows(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Basis (as rows) of ``{v : row . v = 0 for every row}``, in RREF."""
    red, pivots = rref_rows(rows, ncols)
    return nullspace_of_rref(red, pivots, ncols)


def nullspace_of_rref(red, pivots, ncols: int):
    """Nullspace basis (RREF) given an already reduced system."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    if not basis:
        return []
    out, _ = rref_rows(basis, ncols)
    return out


def rank_rows(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    return len(rref_rows(rows, ncols)[1])


def int_rank(rows: Sequence[Sequence[int]], stop: int | None = None) -> int:
    """Rank of an integer matrix by fraction-free elimination.

    Stops early once the rank reaches ``stop``.
    """
    m = [list(r) for r in rows if any(r)]
    rank = 0
    while m:
        piv = m.pop()
        c = next(k for k, v in enumerate(piv) if v)
        a = piv[c]
        rank += 1
        if rank == stop:
            break
        nxt = []
        for r in m:
            b = r[c]
            if b:
                r = [a * x - b * y for x, y in zip(r, piv)]
            if any(r):
                nxt.append(r)
        m = nxt
    return rank


def det_rows(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    det = _ONE
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            return _ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        p = m[c][c]
        det *= p
        for i in range(c + 1, n):
            f = m[i][c]
            if f != 0:
                f = f / p
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), _ZERO)


# --- matrix type ------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "ExactMatrix":
        data = [tuple(as_rational(v) for v in r) for r in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), cols, tuple(v for r in data for v in r))

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable], rows: int | None = None) -> "ExactMatrix":
        cols = [tuple(as_rational(v) for v in c) for c in columns]
        return cls.from_rows(zip(*cols), len(cols)) if cols else cls(rows or 0, 0, ())

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_rows(self.columns(), self.rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = other.columns()
        return ExactMatrix.from_rows(
            [[dot(r, c) for c in ocols] for r in self.row_list()], other.cols
        )

    def delete_column(self, j: int) -> "ExactMatrix":
        cols = self.columns()
        del cols[j]
        return ExactMatrix.from_columns(cols, self.rows)

    def submatrix_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        cols = self.columns()
        return ExactMatrix.from_columns([cols[j] for j in idx], self.rows)

    def rank(self) -> int:
        return rank_rows(self.row_list(), self.cols)

    def to_json(self) -> list:
        return [[format_rational(v) for v in r] for r in self.row_list()]

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(v) for v in r) for r in self.row_list())
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"


def rref(m: ExactMatrix):
    """Return ``(reduced, pivots, rank)``; ``reduced`` keeps the input shape."""
    red, pivots = rref_rows(m.row_list(), m.cols)
    zero_rows = [(_ZERO,) * m.cols] * (m.rows - len(red))
    return ExactMatrix.from_rows(list(red) + zero_rows, m.cols), list(pivots), len(pivots)


def det(m: ExactMatrix) -> Fraction:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    return det_rows(m.row_list())


def nullspace(m: ExactMatrix) -> ExactMatrix:
    return ExactMatrix.from_rows(nullspace_rows(m.row_list(), m.cols), m.cols)


def inverse(m: ExactMatrix) -> ExactMatrix:
    n = m.rows
    if m.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.row_list())]
    red, pivots = rref_rows(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return ExactMatrix.from_rows([r[n:] for r in red[:n]], n)


def vandermonde(t: Sequence, height: int) -> ExactMatrix:
    """``height`` x ``len(t)`` matrix whose column j is ``(1, t_j, ..., t_j^(height-1))``."""
    ts = [as_rational(v) for v in t]
    return ExactMatrix.from_rows([[v ** k for v in ts] for k in range(height)], len(ts))
