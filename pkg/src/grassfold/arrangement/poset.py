"""Intersection posets of complete linear configurations."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import PreconditionError
from ..exactlin import int_rank
from ..projgeom import Subspace
from .linear import LinearConfiguration


@dataclass(frozen=True)
class IntersectionPoset:
    """Elements sorted by (dimension, basis); ``up[i]`` is a bitmask of the strict upper set."""

    ambient: int
    elements: tuple
    rank: tuple
    up: tuple
    _covers: list | None = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.elements)

    def index(self, s: Subspace) -> int:
        return self.elements.index(s)

    def leq(self, i: int, j: int) -> bool:
        return i == j or bool(self.up[i] >> j & 1)

    def covers(self) -> list:
        """Transitively reduced order as ``(lower, upper)`` pairs."""
        if self._covers is None:
            out = []
            for i, mask in enumerate(self.up):
                above = 0
                for k in _bits(mask):
                    above |= self.up[k]
                out.extend((i, j) for j in _bits(mask & ~above))
            object.__setattr__(self, "_covers", out)
        return list(self._covers)

    def upper_covers(self, i: int) -> list:
        return [j for lo, j in self.covers() if lo == i]

    def lower_covers(self, j: int) -> list:
        return [i for i, hi in self.covers() if hi == j]

    def order_pairs(self) -> list:
        return [(i, j) for i, m in enumerate(self.up) for j in _bits(m)]

    def to_json(self) -> dict:
        return {
            "schema": "grassfold.poset/1",
            "ambient": self.ambient,
            "elements": [s.to_json() for s in self.elements],
            "rank": list(self.rank),
            "order": [list(c) for c in self.covers()],
        }


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def intersection_poset(h: LinearConfiguration, check: bool = True) -> IntersectionPoset:
    if check and not h.is_complete():
        raise PreconditionError("configuration is not complete")
    elems = h.sorted()
    n = len(elems)
    hyps = [k for k, s in enumerate(elems) if s.is_hyperplane()]
    sig = [0] * n
    for k in hyps:
        hk = elems[k]
        for i, s in enumerate(elems):
            if hk.contains(s):
                sig[i] |= 1 << k
    # an element is cut out by its hyperplanes iff their normals have full codimension
    cut = []
    for i, s in enumerate(elems):
        if s.is_hyperplane():
            cut.append(True)
            continue
        normals = [elems[k].int_normals()[0] for k in _bits(sig[i])]
        cut.append(len(normals) >= s.codim and int_rank(normals, s.codim) == s.codim)
    dims = [e.dim for e in elems]
    # members[k]: elements lying on hyperplane k
    members = {k: 0 for k in hyps}
    for i in range(n):
        for k in _bits(sig[i]):
            members[k] |= 1 << i
    everything = (1 << n) - 1
    uncut = [j for j in range(n) if not cut[j]]
    up = [0] * n
    for i, e in enumerate(elems):
        if cut[i]:
            # f >= e iff every hyperplane through f passes through e
            outside = 0
            for k in hyps:
                if not sig[i] >> k & 1:
                    outside |= members[k]
            up[i] = everything & ~outside & ~(1 << i)
            # elements not cut out by hyperplanes need a direct check
            for j in uncut:
                if up[i] >> j & 1 and not elems[j].contains(e):
                    up[i] &= ~(1 << j)
        for j, f in enumerate(elems):
            if not cut[i] and dims[j] > dims[i] and f.contains(e):
                up[i] |= 1 << j
    return IntersectionPoset(h.ambient, tuple(elems), tuple(s.dim for s in elems), tuple(up))
