"""Stratum and closure membership, and constructible open sets."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from ..arrangement.script import Derivation, evaluate_script
from ..errors import IndeterminateError, MalformedScriptError, PreconditionError, ScriptDegeneracy
from ..projgeom import Configuration, join, meet_all, span
from ..template.scripted import ScriptedTemplate, realizes
from .point import point_config


class Closure(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


def _config(v) -> Configuration:
    return v if isinstance(v, Configuration) else point_config(v)


def _check_shape(v, st: ScriptedTemplate):
    x = _config(v)
    if (x.ambient + 1, len(x) - x.ambient - 2) != st.shape:
        raise PreconditionError(f"point shape does not match template shape {st.shape}")
    return x


def stratum_member(v, st: ScriptedTemplate) -> bool:
    """``T in T(x(v))``: the script replays and yields exactly the template."""
    return realizes(_check_shape(v, st), st)


@dataclass(frozen=True)
class IncidenceConditions:
    """Closed conditions read off the witness realization of a scripted template.

    Hyperplanes are named by their labels (``("span", J)`` or ``("step", k)``).
    ``same``: label groups that must name one hyperplane.  ``meets``: groups of
    hyperplanes whose intersection must have dimension at least the given
    value.  ``marks``: mark j must lie on every listed hyperplane.
    """

    same: tuple
    meets: tuple
    marks: tuple

    def count(self) -> int:
        return len(self.same) + len(self.meets) + len(self.marks)


@lru_cache(maxsize=4096)
def incidence_conditions(st: ScriptedTemplate) -> IncidenceConditions:
    d = evaluate_script(st.script, st.witness)
    m = st.witness.ambient
    label = {h: d.labels[h][0] for h in d.hyperplanes}
    same = tuple(tuple(d.labels[h]) for h in d.hyperplanes if len(d.labels[h]) > 1)
    meets = []
    if m > 0:
        for e in d.configuration.sorted():
            if e.is_hyperplane():
                continue
            above = [h for h in d.hyperplanes if h.contains(e)]
            if len(above) > e.codim:
                meets.append((e.dim, tuple(label[h] for h in above)))
    marks = []
    for j, pt in enumerate(st.witness.points):
        need = []
        for h in d.hyperplanes:
            if not h.contains_vector(pt.coords):
                continue
            lb = [l for l in d.labels[h] if l[0] == "span" and j in l[1]]
            if not lb:
                need.append(label[h])
        if need:
            marks.append((j, tuple(need)))
    return IncidenceConditions(same, tuple(meets), tuple(marks))


class _Resolver:
    """Resolve hyperplane labels on a configuration without strictness checks."""

    def __init__(self, st: ScriptedTemplate, x: Configuration):
        self.d = Derivation(x, st.script)
        self.x = x
        self.script = st.script
        self.cache = {}

    def hyperplane(self, lab):
        if lab in self.cache:
            return self.cache[lab]
        kind, arg = lab
        if kind == "span":
            h = span(self.x.points[j] for j in arg)
        else:
            while len(self.d.step_hyperplanes) <= arg:
                k = len(self.d.step_hyperplanes)
                step = self.script[k]
                L = self._resolve(step.base, k)
                h_k = join(L, span(self.x.points[j] for j in step.points)) if step.points else L
                if not h_k.is_hyperplane():
                    raise ScriptDegeneracy(k, "not-hyperplane")
                self.d.step_hyperplanes.append(h_k)
            h = self.d.step_hyperplanes[arg]
        if not h.is_hyperplane():
            raise ScriptDegeneracy(None, "label-not-hyperplane", repr(lab))
        self.cache[lab] = h
        return h

    def _resolve(self, ref, upto):
        kind, arg = ref
        if kind == "span":
            return span(self.x.points[j] for j in arg)
        if kind == "step":
            self.hyperplane(("step", arg))
            return self.d.step_hyperplanes[arg]
        parts = [self._resolve(r, upto) for r in arg]
        out = meet_all(parts)
        if out is None:
            raise ScriptDegeneracy(upto, "empty-meet")
        return out


def closure_member(v, st: ScriptedTemplate) -> Closure:
    """Evaluate the template's incidence equalities on ``v`` (open conditions ignored)."""
    x = _check_shape(v, st)
    cond = incidence_conditions(st)
    r = _Resolver(st, x)
    try:
        for group in cond.same:
            hs = {r.hyperplane(l) for l in group}
            if len(hs) > 1:
                return Closure.FAILS
        for j, labs in cond.marks:
            pt = x.points[j]
            for l in labs:
                if not r.hyperplane(l).contains_vector(pt.coords):
                    return Closure.FAILS
        for dim, labs in cond.meets:
            e = meet_all([r.hyperplane(l) for l in labs])
            if e is None or e.dim < dim:
                return Closure.FAILS
    except ScriptDegeneracy:
        return Closure.INDETERMINATE
    except MalformedScriptError:
        return Closure.INDETERMINATE
    return Closure.HOLDS


@dataclass(frozen=True)
class ConstructibleSet:
    """Complement of the union of the closures of the excluded strata."""

    shape: tuple
    excluded: tuple = ()

    def intersect(self, other: "ConstructibleSet") -> "ConstructibleSet":
        if self.shape != other.shape:
            raise PreconditionError("shapes differ")
        return ConstructibleSet(self.shape, self.excluded + other.excluded)

    def to_json(self) -> dict:
        return {
            "schema": "grassfold.constructible/1",
            "shape": list(self.shape),
            "excluded": [t.to_json() for t in self.excluded],
        }


def in_constructible_open(v, u: ConstructibleSet) -> bool:
    x = _config(v)
    if (x.ambient + 1, len(x) - x.ambient - 2) != tuple(u.shape):
        raise PreconditionError("shape mismatch")
    for st in u.excluded:
        res = closure_member(x, st)
        if res is Closure.HOLDS:
            return False
        if res is Closure.INDETERMINATE:
            raise IndeterminateError(f"closure membership undecided for template {st.digest()}")
    return True
