"""Projective points, subspaces, joins and meets over the rationals.

A subspace of P^m is stored as the reduced row echelon basis of its cone in
Q^(m+1), which makes equality a plain tuple comparison.  An empty meet is
reported as ``None``.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegenerateInputError, PreconditionError, SchemaError
from .exactlin import (
    ExactMatrix,
    as_rational,
    det_rows,
    dot,
    format_rational,
    nullspace_of_rref,
    nullspace_rows,
    rank_rows,
    rref_rows,
)

CONFIG_SCHEMA = "grassfold.config/1"


def canonical_vector(coords: Sequence) -> tuple:
    """Scale a nonzero vector so that its first nonzero coordinate is 1."""
    v = [as_rational(c) for c in coords]
    for c in v:
        if c != 0:
            if c == 1:
                return tuple(v)
            return tuple(x / c for x in v)
    raise DegenerateInputError("the zero vector is not a projective point")


@dataclass(frozen=True)
class ProjPoint:
    ambient: int
    coords: tuple

    @classmethod
    def of(cls, coords: Sequence) -> "ProjPoint":
        v = canonical_vector(coords)
        return cls(len(v) - 1, v)

    @classmethod
    def affine(cls, *xs) -> "ProjPoint":
        """Homogenize affine coordinates as ``(1, x_1, ..., x_m)``."""
        return cls.of((1,) + tuple(xs))

    def subspace(self) -> "Subspace":
        return Subspace(self.ambient, (self.coords,))

    def to_json(self) -> list:
        return [format_rational(c) for c in self.coords]

    def __repr__(self):
        return "ProjPoint(" + ", ".join(format_rational(c) for c in self.coords) + ")"


class Subspace:
    """A nonempty linear subspace of P^m (RREF basis of its cone)."""

    __slots__ = ("ambient", "basis", "_normals", "_hash", "_inormals", "_ibasis")

    def __init__(self, ambient: int, basis: tuple):
        self.ambient = ambient
        self.basis = basis
        self._normals = None
        self._hash = None
        self._inormals = None
        self._ibasis = None

    @classmethod
    def from_vectors(cls, ambient: int, vectors: Iterable[Sequence]) -> "Subspace | None":
        rows = [tuple(as_rational(c) for c in v) for v in vectors]
        if not rows:
            return None
        red, _ = rref_rows(rows, ambient + 1)
        if not red:
            return None
        return cls(ambient, tuple(red))

    @classmethod
    def from_normals(cls, ambient: int, normals: Iterable[Sequence]) -> "Subspace | None":
        normals = [tuple(as_rational(c) for c in n) for n in normals]
        if not normals:
            return cls.whole(ambient)
        red, pivots = rref_rows(normals, ambient + 1)
        basis = nullspace_of_rref(red, pivots, ambient + 1)
        if not basis:
            return None
        s = cls(ambient, tuple(basis))
        s._normals = tuple(red)
        return s

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple(_identity_rows(ambient + 1)))

    @property
    def dim(self) -> int:
        """Projective dimension."""
        return len(self.basis) - 1

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    @property
    def normals(self) -> tuple:
        """RREF basis of the annihilator (linear forms vanishing on the subspace)."""
        if self._normals is None:
            self._normals = tuple(nullspace_rows(self.basis, self.ambient + 1))
        return self._normals

    @property
    def normal(self) -> tuple:
        """The defining linear form of a hyperplane."""
        if self.dim != self.ambient - 1:
            raise PreconditionError("normal() is only defined for hyperplanes")
        return self.normals[0]

    def is_hyperplane(self) -> bool:
        return self.dim == self.ambient - 1

    def int_normals(self) -> tuple:
        if self._inormals is None:
            self._inormals = tuple(_integral(n) for n in self.normals)
        return self._inormals

    def int_basis(self) -> tuple:
        if self._ibasis is None:
            self._ibasis = tuple(_integral(b) for b in self.basis)
        return self._ibasis

    def contains_vector(self, v: Sequence) -> bool:
        return all(dot(n, v) == 0 for n in self.int_normals())

    def contains(self, other: "Subspace") -> bool:
        if len(other.basis) > len(self.basis):
            return False
        normals = self._inormals or self.int_normals()
        basis = other._ibasis or other.int_basis()
        for n in normals:
            for b in basis:
                if sum(map(operator.mul, n, b)):
                    return False
        return True

    def point(self) -> ProjPoint:
        if self.dim != 0:
            raise PreconditionError("not a point")
        return ProjPoint(self.ambient, self.basis[0])

    def key(self):
        return (self.ambient, self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient, self.basis))
        return self._hash

    def sort_key(self):
        return (self.dim, tuple(tuple((c.numerator, c.denominator) for c in r) for r in self.basis))

    def to_json(self) -> list:
        return [[format_rational(c) for c in r] for r in self.basis]

    def __repr__(self):
        rows = "; ".join(" ".join(format_rational(c) for c in r) for r in self.basis)
        return f"Subspace(P^{self.ambient}, dim {self.dim}: {rows})"


def _integral(row) -> tuple:
    """Scale a rational row to integers (same projective class, same zero pattern)."""
    den = 1
    for c in row:
        d = c.denominator
        den = den * d // math.gcd(den, d)
    return tuple(int(c * den) for c in row)


def _identity_rows(n):
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


@dataclass(frozen=True)
class Configuration:
    ambient: int
    points: tuple

    @classmethod
    def of(cls, coords: Iterable[Sequence]) -> "Configuration":
        pts = tuple(ProjPoint.of(c) for c in coords)
        if not pts:
            raise DegenerateInputError("empty configuration")
        m = pts[0].ambient
        if any(p.ambient != m for p in pts):
            raise DegenerateInputError("points live in different projective spaces")
        return cls(m, pts)

    @classmethod
    def affine(cls, coords: Iterable[Sequence]) -> "Configuration":
        return cls.of([(1,) + tuple(c) for c in coords])

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def delete(self, i: int) -> "Configuration":
        return Configuration(self.ambient, self.points[:i] + self.points[i + 1:])

    def insert(self, i: int, point: ProjPoint) -> "Configuration":
        return Configuration(self.ambient, self.points[:i] + (point,) + self.points[i:])

    def subconfiguration(self, idx: Iterable[int]) -> "Configuration":
        return Configuration(self.ambient, tuple(self.points[i] for i in idx))

    def vectors(self) -> list:
        return [p.coords for p in self.points]

    def matrix(self) -> ExactMatrix:
        """Points as the columns of an (m+1) x n matrix."""
        return ExactMatrix.from_columns(self.vectors(), self.ambient + 1)

    def spans(self) -> bool:
        return rank_rows(self.vectors(), self.ambient + 1) == self.ambient + 1

    def transform(self, g: ExactMatrix) -> "Configuration":
        return Configuration.of([(g @ ExactMatrix.from_columns([v])).column(0) for v in self.vectors()])

    def to_json(self) -> dict:
        return {"schema": CONFIG_SCHEMA, "ambient": self.ambient, "points": [p.to_json() for p in self.points]}

    @classmethod
    def from_json(cls, obj, where="") -> "Configuration":
        """Read ``{"points": [[x_0, ..., x_m], ...]}``; ``"affine": true`` prepends 1."""
        if not isinstance(obj, dict) or "points" not in obj:
            raise SchemaError(where, "configuration must be an object with 'points'")
        if obj.get("schema", CONFIG_SCHEMA) != CONFIG_SCHEMA:
            raise SchemaError(where + "/schema", f"expected {CONFIG_SCHEMA!r}")
        pts = obj["points"]
        if not isinstance(pts, list) or not pts or not all(isinstance(p, list) for p in pts):
            raise SchemaError(where + "/points", "expected a nonempty list of coordinate lists")
        try:
            coords = [[as_rational(c) for c in p] for p in pts]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(where + "/points", f"bad rational: {exc}") from None
        if obj.get("affine"):
            coords = [[Fraction(1)] + c for c in coords]
        if len({len(c) for c in coords}) != 1:
            raise SchemaError(where + "/points", "points have different lengths")
        if "ambient" in obj and obj["ambient"] != len(coords[0]) - 1:
            raise SchemaError(where + "/ambient", "ambient does not match coordinate length")
        try:
            return cls.of(coords)
        except DegenerateInputError as exc:
            raise SchemaError(where + "/points", str(exc)) from None


# --- operations -------------------------------------------------------------


def span(points: Iterable) -> Subspace:
    pts = list(points)
    if not pts:
        raise PreconditionError("span of an empty set")
    m = pts[0].ambient
    return Subspace.from_vectors(m, [p.coords for p in pts])


def join(s1: Subspace, s2: Subspace) -> Subspace:
    if s1.ambient != s2.ambient:
        raise PreconditionError("ambient dimensions differ")
    return Subspace.from_vectors(s1.ambient, s1.basis + s2.basis)


def meet(s1: Subspace, s2: Subspace) -> Subspace | None:
    if s1.ambient != s2.ambient:
        raise PreconditionError("ambient dimensions differ")
    if s1.contains(s2):
        return s2
    if s2.contains(s1):
        return s1
    if s2.is_hyperplane():
        return _cut(s1, s2)
    if s1.is_hyperplane():
        return _cut(s2, s1)
    return Subspace.from_normals(s1.ambient, s1.normals + s2.normals)


def _cut(s: Subspace, h: Subspace) -> Subspace | None:
    """Intersection of ``s`` with a hyperplane not containing it."""
    if s.dim == 0:
        return None
    n = h.int_normals()[0]
    basis = s.int_basis()
    vals = [sum(a * b for a, b in zip(n, v)) for v in basis]
    j = next(k for k, c in enumerate(vals) if c != 0)
    cj, bj = vals[j], basis[j]
    rows = [
        tuple(Fraction(cj * x - vals[k] * y) for x, y in zip(v, bj))
        for k, v in enumerate(basis)
        if k != j
    ]
    red, _ = rref_rows(rows, s.ambient + 1)
    return Subspace(s.ambient, tuple(red))


def meet_all(subspaces: Iterable[Subspace]) -> Subspace | None:
    subs = list(subspaces)
    if not subs:
        raise PreconditionError("meet of an empty family")
    normals = []
    for s in subs:
        normals.extend(s.normals)
    return Subspace.from_normals(subs[0].ambient, normals)


def in_general_position(c: Configuration, p: int) -> bool:
    """True iff every p of the points span P^(p-1)."""
    if c.ambient != p - 1:
        raise PreconditionError(f"expected points of P^{p - 1}, got P^{c.ambient}")
    vecs = c.vectors()
    if len(vecs) < p:
        return rank_rows(vecs, p) == len(vecs)
    return all(det_rows([vecs[i] for i in idx]) != 0 for idx in itertools.combinations(range(len(vecs)), p))


def projection_coordinate(center: Sequence) -> int:
    """Index of the coordinate hyperplane used as the projection target.

    It is the largest index at which the center has a nonzero coordinate, so
    the target hyperplane never contains the center.
    """
    for k in range(len(center) - 1, -1, -1):
        if center[k] != 0:
            return k
    raise DegenerateInputError("zero center")


def project_vector(v: Sequence, center: Sequence, k: int | None = None) -> tuple:
    """Image of ``v`` under projection from ``center`` onto ``{y_k = 0}``, with ``y_k`` dropped."""
    if k is None:
        k = projection_coordinate(center)
    f = v[k] / center[k]
    w = [a - f * c for a, c in zip(v, center)]
    del w[k]
    return tuple(w)


def project_from_point(c: Configuration, i: int) -> Configuration:
    """Project every point but the i-th away from the i-th point."""
    center = c.points[i]
    k = projection_coordinate(center.coords)
    images = []
    for j, p in enumerate(c.points):
        if j == i:
            continue
        if p == center:
            raise DegenerateInputError(f"point {j} coincides with the projection center {i}")
        images.append(ProjPoint.of(project_vector(p.coords, center.coords, k)))
    return Configuration(c.ambient - 1, tuple(images))


def project_subspace(s: Subspace, center: Sequence) -> Subspace | None:
    """Image of a subspace under projection from ``center`` (``None`` if it collapses)."""
    k = projection_coordinate(center)
    vecs = [project_vector(b, center, k) for b in s.basis]
    return Subspace.from_vectors(s.ambient - 1, vecs)
