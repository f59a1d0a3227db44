"""Linear configurations, completion and derived configurations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..errors import DegenerateInputError, PreconditionError, SchemaError
from ..exactlin import as_rational
from ..projgeom import Configuration, Subspace, join, meet, span

ARRANGEMENT_SCHEMA = "grassfold.arrangement/1"


@dataclass(frozen=True)
class LinearConfiguration:
    ambient: int
    subspaces: frozenset

    @classmethod
    def of(cls, ambient: int, subspaces: Iterable[Subspace]) -> "LinearConfiguration":
        subs = frozenset(subspaces)
        if any(s.ambient != ambient for s in subs):
            raise PreconditionError("subspace in the wrong ambient space")
        return cls(ambient, subs)

    def __len__(self):
        return len(self.subspaces)

    def __contains__(self, s):
        return s in self.subspaces

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list:
        return sorted(self.subspaces, key=Subspace.sort_key)

    def hyperplanes(self) -> list:
        return [s for s in self.sorted() if s.is_hyperplane()]

    def of_dim(self, d: int) -> list:
        return [s for s in self.sorted() if s.dim == d]

    def points(self) -> list:
        return self.of_dim(0)

    def is_complete(self) -> bool:
        subs = self.subspaces
        for a, b in itertools.combinations(subs, 2):
            m = meet(a, b)
            if m is not None and m not in subs:
                return False
        return True

    def union(self, more: Iterable[Subspace]) -> "LinearConfiguration":
        return LinearConfiguration.of(self.ambient, self.subspaces | frozenset(more))

    def issubset(self, other: "LinearConfiguration") -> bool:
        return self.subspaces <= other.subspaces

    def to_json(self) -> dict:
        return {
            "schema": ARRANGEMENT_SCHEMA,
            "ambient": self.ambient,
            "subspaces": [s.to_json() for s in self.sorted()],
        }

    @classmethod
    def from_json(cls, obj, where="") -> "LinearConfiguration":
        """Subspaces are given by spanning vectors; the result is not completed."""
        if not isinstance(obj, dict) or obj.get("schema", ARRANGEMENT_SCHEMA) != ARRANGEMENT_SCHEMA:
            raise SchemaError(where + "/schema", f"expected {ARRANGEMENT_SCHEMA!r}")
        try:
            m = int(obj["ambient"])
            subs = []
            for k, rows in enumerate(obj["subspaces"]):
                vecs = [[as_rational(c) for c in r] for r in rows]
                if any(len(v) != m + 1 for v in vecs):
                    raise ValueError(f"subspace {k} has vectors of the wrong length")
                s = Subspace.from_vectors(m, vecs)
                if s is None:
                    raise ValueError(f"subspace {k} is empty")
                subs.append(s)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(where, f"bad arrangement: {exc}") from None
        return cls.of(m, subs)


def _closure(generators: list, existing: set | None = None) -> set:
    """All nonempty intersections of subsets of ``generators`` (plus ``existing``).

    For each element only one meet is computed per resulting element: once
    ``s & g`` is known, every generator containing it is skipped.
    """
    if not existing and generators and generators[0].ambient == 2:
        return _plane_closure(generators)
    result = set(existing or ()) | set(generators)
    frontier = list(result)
    while frontier:
        fresh = []
        for s in frontier:
            covered = set()
            for k, g in enumerate(generators):
                if k in covered or g.contains(s):
                    continue
                m = meet(s, g)
                if m is None:
                    continue
                covered.update(j for j, g2 in enumerate(generators) if g2.contains(m))
                if m not in result:
                    result.add(m)
                    fresh.append(m)
        frontier = fresh
    return result


def _plane_closure(generators: list) -> set:
    """In P^2 every new meet is the crossing point of two distinct lines."""
    result = set(generators)
    lines = [g.int_normals()[0] for g in result if g.dim == 1]
    seen = set()
    for (a0, a1, a2), (b0, b1, b2) in itertools.combinations(lines, 2):
        v = (a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0)
        lead = next(c for c in v if c)
        g = math.gcd(*v) * (1 if lead > 0 else -1)
        v = (v[0] // g, v[1] // g, v[2] // g)
        if v in seen:
            continue
        seen.add(v)
        lead = next(c for c in v if c)
        pt = Subspace(2, (tuple(Fraction(c, lead) for c in v),))
        pt._ibasis = (v,)
        result.add(pt)
    return result


def complete(h: LinearConfiguration) -> LinearConfiguration:
    """Smallest configuration containing ``h`` and closed under nonempty meets."""
    gens = h.sorted()
    return LinearConfiguration(h.ambient, frozenset(_closure(gens)))


def add_and_complete(h: LinearConfiguration, new: Subspace) -> LinearConfiguration:
    """Completion of ``h + {new}`` for an already complete ``h``."""
    if new in h.subspaces:
        return h
    out = set(h.subspaces)
    out.add(new)
    for s in h.subspaces:
        m = meet(s, new)
        if m is not None:
            out.add(m)
    return LinearConfiguration(h.ambient, frozenset(out))


def spanned_hyperplanes(x: Configuration) -> dict:
    """Hyperplanes spanned by subconfigurations, each with the index sets spanning it."""
    m = x.ambient
    found: dict = {}
    if m == 0:
        return found
    for idx in itertools.combinations(range(len(x)), m):
        s = span(x.points[i] for i in idx)
        if s.is_hyperplane():
            found.setdefault(s, []).append(idx)
    return found


def base_derived(x: Configuration) -> LinearConfiguration:
    """Completion of all hyperplanes spanned by subconfigurations of ``x``.

    In P^0 there are no hyperplanes; the configuration is taken to be the
    single point so that markings still land on a rank-0 element.
    """
    if not x.spans():
        raise DegenerateInputError("configuration does not span its ambient space")
    if x.ambient == 0:
        return LinearConfiguration(0, frozenset([Subspace.whole(0)]))
    hyps = sorted(spanned_hyperplanes(x), key=Subspace.sort_key)
    return LinearConfiguration(x.ambient, frozenset(_closure(hyps)))


def extend_derived(h: LinearConfiguration, l: Subspace, xsub: Iterable) -> LinearConfiguration:
    """Adjoin ``l * span(xsub)`` (required to be a hyperplane) and complete."""
    if l not in h.subspaces:
        raise PreconditionError("base element is not in the configuration")
    pts = list(xsub)
    target = join(l, span(pts)) if pts else l
    if not target.is_hyperplane():
        raise PreconditionError("join is not a hyperplane")
    return add_and_complete(h, target)


def derivation_step_for(h: LinearConfiguration, target: Subspace, x: Configuration):
    """Find ``(L, X)`` with ``L`` in ``h`` and ``L * span(X) == target``, or ``None``.

    ``X`` is returned as a tuple of point indices of ``x``; only points lying
    on ``target`` can contribute, and a single point always suffices when any
    subset does (the join of ``L`` with one more point raises the dimension by
    at most one), except when ``L`` is ``target`` itself.
    """
    if not target.is_hyperplane():
        return None
    if target in h.subspaces:
        return target, ()
    on_target = [j for j, p in enumerate(x.points) if target.contains_vector(p.coords)]
    for L in sorted((s for s in h.subspaces if target.contains(s)), key=lambda s: (-s.dim, s.sort_key())):
        if L.dim < target.dim - len(on_target):
            continue
        for k in range(1, len(on_target) + 1):
            for X in itertools.combinations(on_target, k):
                if L.dim + k < target.dim:
                    continue
                if join(L, span(x.points[j] for j in X)) == target:
                    return L, X
    return None
