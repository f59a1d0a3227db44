"""Marked templates: isomorphism classes of ranked posets with a marking."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from ..arrangement.linear import LinearConfiguration
from ..arrangement.poset import IntersectionPoset, intersection_poset
from ..errors import PreconditionError, SchemaError
from ..projgeom import Configuration
from .canon import canonical_form


@dataclass(frozen=True)
class MarkedTemplate:
    """Stored in canonical labelling: element k of ``ranks`` is canonical id k.

    ``code`` is the full canonical encoding, so two templates are equal iff
    their underlying marked posets are isomorphic.
    """

    code: tuple

    @classmethod
    def from_poset(cls, ranks, covers, marking) -> "MarkedTemplate":
        ranks = list(ranks)
        for a, b in covers:
            if ranks[a] >= ranks[b]:
                raise PreconditionError("rank is not strictly order preserving")
        return cls(canonical_form(ranks, list(covers), list(marking)).code)

    @property
    def size(self) -> int:
        return self.code[0]

    @property
    def ranks(self) -> tuple:
        return self.code[1]

    @property
    def covers(self) -> tuple:
        return self.code[2]

    @property
    def marking(self) -> tuple:
        return self.code[3]

    @property
    def n_marks(self) -> int:
        return len(self.marking)

    def code_bytes(self) -> bytes:
        return repr(self.code).encode()

    def digest(self) -> str:
        return hashlib.sha256(self.code_bytes()).hexdigest()[:16]

    def upper_covers(self, e: int) -> list:
        return [b for a, b in self.covers if a == e]

    def lower_covers(self, e: int) -> list:
        return [a for a, b in self.covers if b == e]

    def of_rank(self, r: int) -> list:
        return [k for k, rk in enumerate(self.ranks) if rk == r]

    def up_sets(self) -> list:
        """Strict upper set of each element, as bitmasks."""
        n = self.size
        up = [0] * n
        for e in sorted(range(n), key=lambda k: -self.ranks[k]):
            for b in self.upper_covers(e):
                up[e] |= (1 << b) | up[b]
        return up

    def count_by_rank(self) -> dict:
        out = {}
        for r in self.ranks:
            out[r] = out.get(r, 0) + 1
        return out

    def to_json(self) -> dict:
        return {
            "elements": [{"id": k, "rank": r} for k, r in enumerate(self.ranks)],
            "order": [list(c) for c in self.covers],
            "marking": list(self.marking),
            "code": self.digest(),
        }

    @classmethod
    def from_json(cls, obj, where="") -> "MarkedTemplate":
        try:
            elems = obj["elements"]
            ids = [e["id"] for e in elems]
            ranks = {e["id"]: int(e["rank"]) for e in elems}
            order = [tuple(p) for p in obj["order"]]
            marking = list(obj["marking"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(where, f"bad template: {exc}") from None
        pos = {i: k for k, i in enumerate(ids)}
        if len(pos) != len(ids):
            raise SchemaError(where + "/elements", "duplicate element id")
        try:
            covers = [(pos[a], pos[b]) for a, b in order]
            mk = [pos[m] for m in marking]
        except (KeyError, ValueError):
            raise SchemaError(where, "order or marking refers to an unknown id") from None
        rk = [ranks[i] for i in ids]
        # accept any (not necessarily reduced) order relation
        covers = _transitive_reduction(len(ids), covers)
        try:
            return cls.from_poset(rk, covers, mk)
        except PreconditionError as exc:
            raise SchemaError(where + "/order", str(exc)) from None


def _transitive_reduction(n, pairs):
    up = [set() for _ in range(n)]
    for a, b in pairs:
        up[a].add(b)
    changed = True
    while changed:
        changed = False
        for a in range(n):
            extra = set()
            for b in up[a]:
                extra |= up[b]
            if not extra <= up[a]:
                up[a] |= extra
                changed = True
    out = []
    for a in range(n):
        for b in up[a]:
            if not any(b in up[c] for c in up[a] if c != b):
                out.append((a, b))
    return sorted(out)


def template_of(h: LinearConfiguration, marking: Configuration, poset: IntersectionPoset | None = None) -> MarkedTemplate:
    """Marked template of a complete configuration with marks ``x_j``."""
    if poset is None:
        poset = intersection_poset(h, check=False)
    index = {s: k for k, s in enumerate(poset.elements)}
    mk = []
    for j, pt in enumerate(marking.points):
        s = pt.subspace() if h.ambient > 0 else poset.elements[0]
        if s not in index:
            raise PreconditionError(f"marked point x_{j} is not an element of the configuration")
        mk.append(index[s])
    return MarkedTemplate.from_poset(poset.rank, poset.covers(), mk)


def generated_subposet(t: MarkedTemplate, omit: int) -> MarkedTemplate:
    """Subposet generated by the marks other than ``omit`` (lubs of mark sets, glbs).

    Greatest lower bounds are closed pairwise, which agrees with arbitrary
    glbs on intersection posets of complete configurations.
    """
    n = t.size
    up = t.up_sets()
    down = [0] * n
    for a in range(n):
        for b in range(n):
            if up[a] >> b & 1:
                down[b] |= 1 << a
    closed_up = [up[k] | (1 << k) for k in range(n)]
    closed_down = [down[k] | (1 << k) for k in range(n)]

    def lub(elems):
        common = (1 << n) - 1
        for e in elems:
            common &= closed_up[e]
        cands = [u for u in range(n) if common >> u & 1]
        least = [u for u in cands if all(closed_up[u] >> w & 1 for w in cands)]
        return least[0] if least else None

    def glb(elems):
        common = (1 << n) - 1
        for e in elems:
            common &= closed_down[e]
        cands = [u for u in range(n) if common >> u & 1]
        great = [u for u in cands if all(closed_down[u] >> w & 1 for w in cands)]
        return great[0] if great else None

    kept_marks = [m for j, m in enumerate(t.marking) if j != omit]
    mark_set = sorted(set(kept_marks))
    q = set(mark_set)
    for r in range(1, len(mark_set) + 1):
        for S in itertools.combinations(mark_set, r):
            u = lub(S)
            if u is not None:
                q.add(u)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(sorted(q), 2):
            g = glb((a, b))
            if g is not None and g not in q:
                q.add(g)
                changed = True
    keep = sorted(q)
    pos = {e: k for k, e in enumerate(keep)}
    pairs = [(pos[a], pos[b]) for a in keep for b in keep if up[a] >> b & 1]
    covers = _transitive_reduction(len(keep), pairs)
    return MarkedTemplate.from_poset([t.ranks[e] for e in keep], covers, [pos[m] for m in kept_marks])
