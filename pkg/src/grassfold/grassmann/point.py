"""Points of the generic Grassmannian and the maps between them."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DegenerateInputError, FatDiagonalError, PreconditionError, SchemaError
from ..exactlin import ExactMatrix, as_rational, det_rows, inverse, vandermonde
from ..projgeom import Configuration, ProjPoint, project_from_point


def is_generic(m: ExactMatrix, p: int) -> bool:
    """True iff every p x p minor on a column subset is nonzero."""
    if m.rows != p:
        raise PreconditionError(f"expected {p} rows, got {m.rows}")
    cols = m.columns()
    if len(cols) < p:
        return False
    return all(det_rows([cols[j] for j in idx]) != 0 for idx in itertools.combinations(range(len(cols)), p))


@dataclass(frozen=True)
class GrassPoint:
    p: int
    q: int
    matrix: ExactMatrix

    def __post_init__(self):
        if self.matrix.rows != self.p or self.matrix.cols != self.p + self.q + 1:
            raise PreconditionError(f"matrix must be {self.p} x {self.p + self.q + 1}")

    @classmethod
    def of(cls, rows, p: int | None = None) -> "GrassPoint":
        m = ExactMatrix.from_rows(rows)
        p = m.rows if p is None else p
        return cls(p, m.cols - p - 1, m)

    @classmethod
    def from_configuration(cls, x: Configuration) -> "GrassPoint":
        """Columns are the homogeneous coordinates of the points."""
        p = x.ambient + 1
        return cls(p, len(x) - p - 1, x.matrix())

    @property
    def shape(self) -> tuple:
        return (self.p, self.q)

    def is_generic(self) -> bool:
        return is_generic(self.matrix, self.p)

    def to_json(self) -> dict:
        return {"schema": "grassfold.point/1", "p": self.p, "q": self.q, "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, obj, where="") -> "GrassPoint":
        if not isinstance(obj, dict) or "matrix" not in obj:
            raise SchemaError(where, "point must be an object with 'p', 'q', 'matrix'")
        try:
            m = ExactMatrix.from_rows([[as_rational(c) for c in r] for r in obj["matrix"]])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(where + "/matrix", f"bad matrix: {exc}") from None
        p = obj.get("p", m.rows)
        q = obj.get("q", m.cols - m.rows - 1)
        if p != m.rows or q != m.cols - p - 1:
            raise SchemaError(where, "p, q do not match the matrix shape")
        return cls(p, q, m)


def normal_form(v: GrassPoint) -> GrassPoint:
    """Representative of the GL_p x torus orbit.

    Columns 0..p-1 become the standard basis, column p the all-ones vector and
    every later column has first coordinate 1.
    """
    p = v.p
    cols = v.matrix.columns()
    if len(cols) < p + 1:
        raise PreconditionError("normal form needs at least p + 1 columns")
    head = ExactMatrix.from_columns(cols[:p], p)
    try:
        g = inverse(head)
    except ZeroDivisionError:
        raise DegenerateInputError("first p columns are dependent") from None
    m = g @ v.matrix
    w = m.column(p)
    if any(c == 0 for c in w):
        raise DegenerateInputError("point is not generic")
    rows = [[c / w[i] for c in m.row(i)] for i in range(p)]
    out_cols = []
    for j in range(m.cols):
        col = [rows[i][j] for i in range(p)]
        if j < p:
            col = [Fraction(int(i == j)) for i in range(p)]
        elif j > p:
            if col[0] == 0:
                raise DegenerateInputError("point is not generic")
            col = [c / col[0] for c in col]
        out_cols.append(col)
    return GrassPoint(p, v.q, ExactMatrix.from_columns(out_cols, p))


def y_coordinates(v: GrassPoint) -> tuple:
    """Free entries of the normal form: rows 1.. of columns p+1.."""
    nf = normal_form(v)
    return tuple(nf.matrix[i, j] for j in range(v.p + 1, v.p + v.q + 1) for i in range(1, v.p))


def point_config(v: GrassPoint) -> Configuration:
    return Configuration(v.p - 1, tuple(ProjPoint.of(c) for c in v.matrix.columns()))


def face_map(v: GrassPoint, i: int) -> GrassPoint:
    """Forget the i-th point (delete column i)."""
    if v.q < 1:
        raise PreconditionError("face_map needs q >= 1")
    if not 0 <= i <= v.p + v.q:
        raise PreconditionError(f"index {i} out of range")
    return GrassPoint(v.p, v.q - 1, v.matrix.delete_column(i))


def dual_face_map(v: GrassPoint, i: int) -> GrassPoint:
    """Project the other points from the i-th and return the normal form."""
    if v.p < 2:
        raise PreconditionError("dual_face_map needs p >= 2")
    z = project_from_point(point_config(v), i)
    w = GrassPoint(v.p - 1, v.q, z.matrix())
    if not w.is_generic():
        raise DegenerateInputError("projection is not generic")
    return normal_form(w)


def vandermonde_section(t, p: int) -> GrassPoint:
    ts = [as_rational(c) for c in t]
    if len(set(ts)) != len(ts):
        raise FatDiagonalError("parameters must be distinct")
    if len(ts) < p:
        raise PreconditionError("need at least p parameters")
    return GrassPoint(p, len(ts) - p - 1, vandermonde(ts, p))


def random_point(rng: random.Random, p: int, q: int, height: int = 64) -> GrassPoint:
    """Random generic normal-form point with free entries of height at most ``height``."""
    for _ in range(1000):
        cols = [[Fraction(int(i == j)) for i in range(p)] for j in range(p)]
        if q >= 0:
            cols.append([Fraction(1)] * p)
        for _ in range(q):
            cols.append([Fraction(1)] + [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(p - 1)])
        v = GrassPoint(p, q, ExactMatrix.from_columns(cols, p))
        if v.is_generic():
            return v
    raise DegenerateInputError("could not sample a generic point")


def random_distinct(rng: random.Random, k: int, height: int = 64) -> list:
    out = []
    while len(out) < k:
        t = Fraction(rng.randint(-height, height), rng.randint(1, 8))
        if t not in out:
            out.append(t)
    return out
