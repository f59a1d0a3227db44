"""Derivation scripts: finite witnesses of membership in a derived set.

A script is a sequence of :class:`Step` objects.  Each step names an element
of the configuration built so far by a symbolic reference and a set of marked
points; replaying it adjoins the join of the two (which must be a hyperplane)
and completes.

References are nested tuples::

    ("span", (j, ...))        span of the marked points j, ...
    ("meet", (ref, ...))      intersection of the referenced subspaces
    ("step", k)               hyperplane adjoined by step k

so a script means the same thing on every configuration of the right size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import MalformedScriptError, PreconditionError, ScriptDegeneracy, SchemaError
from ..projgeom import Configuration, Subspace, join, meet_all, span
from .linear import LinearConfiguration, _closure, base_derived, spanned_hyperplanes


@dataclass(frozen=True)
class Step:
    base: tuple
    points: tuple = ()

    def to_json(self) -> dict:
        return {"base": ref_to_json(self.base), "points": list(self.points)}

    @classmethod
    def from_json(cls, obj, where="") -> "Step":
        if not isinstance(obj, dict) or "base" not in obj:
            raise SchemaError(where, "step must be an object with 'base' and 'points'")
        pts = obj.get("points", [])
        if not isinstance(pts, list) or not all(isinstance(j, int) for j in pts):
            raise SchemaError(where + "/points", "expected a list of integers")
        return cls(ref_from_json(obj["base"], where + "/base"), tuple(sorted(set(pts))))


def ref_to_json(ref):
    kind, arg = ref
    if kind == "span":
        return {"span": list(arg)}
    if kind == "meet":
        return {"meet": [ref_to_json(r) for r in arg]}
    if kind == "step":
        return {"step": arg}
    raise MalformedScriptError(f"unknown reference kind {kind!r}")


def ref_from_json(obj, where=""):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError(where, "reference must be an object with exactly one key")
    (kind, arg), = obj.items()
    if kind == "span":
        if not isinstance(arg, list) or not arg or not all(isinstance(j, int) for j in arg):
            raise SchemaError(where + "/span", "expected a nonempty list of integers")
        return ("span", tuple(sorted(set(arg))))
    if kind == "meet":
        if not isinstance(arg, list) or not arg:
            raise SchemaError(where + "/meet", "expected a nonempty list of references")
        return ("meet", tuple(ref_from_json(r, f"{where}/meet/{i}") for i, r in enumerate(arg)))
    if kind == "step":
        if not isinstance(arg, int) or arg < 0:
            raise SchemaError(where + "/step", "expected a nonnegative integer")
        return ("step", arg)
    raise SchemaError(where, f"unknown reference kind {kind!r}")


def script_to_json(script) -> list:
    return [s.to_json() for s in script]


def script_from_json(obj, where="/script") -> tuple:
    if not isinstance(obj, list):
        raise SchemaError(where, "script must be a list")
    return tuple(Step.from_json(s, f"{where}/{i}") for i, s in enumerate(obj))


# --- reference algebra -------------------------------------------------------


def ref_marks(ref) -> set:
    kind, arg = ref
    if kind == "span":
        return set(arg)
    if kind == "meet":
        out = set()
        for r in arg:
            out |= ref_marks(r)
        return out
    return set()


def ref_steps(ref) -> set:
    kind, arg = ref
    if kind == "step":
        return {arg}
    if kind == "meet":
        out = set()
        for r in arg:
            out |= ref_steps(r)
        return out
    return set()


def map_ref(ref, mark_map, step_map):
    """Rewrite marks and step indices of a reference (maps are callables)."""
    kind, arg = ref
    if kind == "span":
        return ("span", tuple(sorted(mark_map(j) for j in arg)))
    if kind == "meet":
        return ("meet", tuple(map_ref(r, mark_map, step_map) for r in arg))
    return ("step", step_map(arg))


def shift_script(script, mark_map, step_offset=0) -> tuple:
    return tuple(
        Step(map_ref(s.base, mark_map, lambda k: k + step_offset), tuple(sorted(mark_map(j) for j in s.points)))
        for s in script
    )


def concat_scripts(*scripts) -> tuple:
    out = []
    for sc in scripts:
        out.extend(shift_script(sc, lambda j: j, len(out)))
    return tuple(out)


def drop_mark(script, i: int) -> tuple:
    """Remove every step that depends (directly or through earlier steps) on mark ``i``.

    Surviving steps are renumbered and marks above ``i`` shift down by one.
    """
    kept = {}
    out = []
    for k, s in enumerate(script):
        if i in s.points or i in ref_marks(s.base):
            continue
        if any(t not in kept for t in ref_steps(s.base)):
            continue
        kept[k] = len(out)
        shift = lambda j: j - 1 if j > i else j  # noqa: E731
        out.append(Step(map_ref(s.base, shift, kept.__getitem__), tuple(shift(j) for j in s.points)))
    return tuple(out)


def insert_mark(script, i: int) -> tuple:
    """Renumber marks as if a new mark were inserted at position ``i``."""
    return shift_script(script, lambda j: j + 1 if j >= i else j)


# --- evaluation --------------------------------------------------------------


class Derivation:
    """The result of replaying a script on a configuration.

    Keeps the hyperplanes with their labels (``("span", J)`` for hyperplanes
    spanned by marks, ``("step", k)`` for adjoined ones); the completed
    configuration is computed on first access.
    """

    def __init__(self, points: Configuration, script: tuple):
        self.points = points
        self.script = tuple(script)
        self.hyperplanes: list = []
        self.labels: dict = {}
        self.step_hyperplanes: list = []
        self._configuration = None

    @property
    def ambient(self) -> int:
        return self.points.ambient

    def _add(self, h: Subspace, label):
        if h not in self.labels:
            self.labels[h] = []
            self.hyperplanes.append(h)
            self._configuration = None
        self.labels[h].append(label)

    @property
    def configuration(self) -> LinearConfiguration:
        if self._configuration is None:
            if self.ambient == 0:
                self._configuration = base_derived(self.points)
            else:
                self._configuration = LinearConfiguration(self.ambient, frozenset(_closure(self.hyperplanes)))
        return self._configuration

    def hyperplanes_containing(self, s: Subspace) -> list:
        return [h for h in self.hyperplanes if h.contains(s)]

    def is_element(self, s: Subspace) -> bool:
        """Membership in the completed configuration without materializing it."""
        if self._configuration is not None:
            return s in self._configuration.subspaces
        above = self.hyperplanes_containing(s)
        if not above:
            return self.ambient == 0
        return meet_all(above) == s

    def resolve(self, ref, upto=None) -> Subspace:
        upto = len(self.step_hyperplanes) if upto is None else upto
        kind, arg = ref
        if kind == "span":
            n = len(self.points)
            if any(j < 0 or j >= n for j in arg):
                raise MalformedScriptError(f"mark out of range in {ref}")
            return span(self.points.points[j] for j in arg)
        if kind == "step":
            if arg >= upto:
                raise MalformedScriptError(f"reference to step {arg} before it exists")
            return self.step_hyperplanes[arg]
        if kind == "meet":
            parts = [self.resolve(r, upto) for r in arg]
            m = meet_all(parts)
            if m is None:
                raise ScriptDegeneracy(upto, "empty-meet", repr(ref))
            return m
        raise MalformedScriptError(f"unknown reference kind {kind!r}")

    def ref_of(self, s: Subspace):
        """A canonical reference for an element of the configuration."""
        marks = [j for j, p in enumerate(self.points.points) if s.contains_vector(p.coords)]
        if marks:
            for J in itertools.combinations(marks, s.dim + 1):
                if span(self.points.points[j] for j in J) == s:
                    return ("span", J)
        if s in self.labels:
            return self.labels[s][0]
        chosen = []
        normals = []
        from ..exactlin import int_rank

        rank = 0
        for h in self.hyperplanes_containing(s):
            r = int_rank(normals + [h.int_normals()[0]])
            if r > rank:
                chosen.append(h)
                normals.append(h.int_normals()[0])
                rank = r
                if rank == s.codim:
                    break
        if rank != s.codim:
            raise PreconditionError("subspace is not an intersection of hyperplanes of the derivation")
        return ("meet", tuple(self.ref_of(h) for h in chosen))

    def step_grew(self, k: int) -> bool:
        """Whether step k adjoined a hyperplane that was not there before."""
        h = self.step_hyperplanes[k]
        return self.labels[h][0] == ("step", k)


def evaluate_script(script, x: Configuration, strict: bool = True) -> Derivation:
    """Replay ``script`` on ``x`` starting from the base derived configuration.

    Raises :class:`ScriptDegeneracy` when a step cannot be carried out on this
    configuration and :class:`MalformedScriptError` for dangling references.
    With ``strict=False`` the check that each base element already belongs to
    the configuration is skipped (used for closure tests).
    """
    if not x.spans():
        raise ScriptDegeneracy(None, "not-spanning")
    d = Derivation(x, script)
    for h, idxs in sorted(spanned_hyperplanes(x).items(), key=lambda kv: kv[1][0]):
        for J in idxs:
            d._add(h, ("span", J))
    for k, step in enumerate(d.script):
        if any(j < 0 or j >= len(x) for j in step.points):
            raise MalformedScriptError(f"step {k}: mark out of range")
        L = d.resolve(step.base, k)
        if strict and not d.is_element(L):
            raise ScriptDegeneracy(k, "base-not-element", repr(step.base))
        target = join(L, span(x.points[j] for j in step.points)) if step.points else L
        if not target.is_hyperplane():
            raise ScriptDegeneracy(k, "not-hyperplane", f"dimension {target.dim}")
        d.step_hyperplanes.append(target)
        d._add(target, ("step", k))
    return d


def derive_script(x: Configuration, targets, base_script=()) -> tuple:
    """Greedily find steps adjoining every hyperplane in ``targets``.

    Raises :class:`PreconditionError` if some target is not reachable.
    """
    script = list(base_script)
    d = evaluate_script(script, x)
    pending = sorted({t for t in targets if t not in d.labels}, key=Subspace.sort_key)
    while pending:
        progress = False
        for t in list(pending):
            found = _find_step(d, t)
            if found is None:
                continue
            script.append(found)
            d = evaluate_script(script, x)
            pending.remove(t)
            progress = True
        if not progress:
            raise PreconditionError(f"{len(pending)} hyperplane(s) are not derivable from the configuration")
    return tuple(script)


def _find_step(d: Derivation, target: Subspace):
    x = d.points
    on_target = [j for j, p in enumerate(x.points) if target.contains_vector(p.coords)]
    cands = [s for s in d.configuration.subspaces if target.contains(s)]
    cands.sort(key=lambda s: (-s.dim, s.sort_key()))
    for L in cands:
        for k in range(1, len(on_target) + 1):
            if L.dim + k < target.dim:
                continue
            for X in itertools.combinations(on_target, k):
                if join(L, span(x.points[j] for j in X)) == target:
                    return Step(d.ref_of(L), X)
    return None


def fiber_type_completion(x: Configuration, script=()) -> Derivation:
    """Extend a derived configuration to one whose cone is of fiber type.

    Projection centers are the last marks ``x_n, x_(n-1), ...``.  At each
    level every pair of hyperplanes that is not vertical for the current
    center (but vertical for all earlier ones) contributes the join of the
    center with their intersection.  Hyperplanes adjoined at one level contain
    all earlier centers, so earlier levels stay valid.
    """
    m = x.ambient
    d = evaluate_script(script, x)
    if m <= 1:
        return d
    n = len(x) - 1
    if n - (m - 2) < 0:
        raise PreconditionError("not enough points to supply a flag of projection centers")
    steps = list(d.script)
    for level in range(1, m):
        centers = [n - i for i in range(level)]
        c = centers[-1]
        cpt = x.points[c]
        flag = span(x.points[j] for j in centers[:-1]) if level > 1 else None
        pool = [h for h in d.hyperplanes if flag is None or h.contains(flag)]
        nonvertical = [h for h in pool if not h.contains_vector(cpt.coords)]
        seen = set(d.labels)
        fresh = []
        for h1, h2 in itertools.combinations(nonvertical, 2):
            sigma = meet_all([h1, h2])
            if sigma is None or sigma.contains_vector(cpt.coords):
                continue
            target = join(sigma, cpt.subspace())
            if target in seen:
                continue
            seen.add(target)
            fresh.append(Step(d.ref_of(sigma), (c,)))
        if fresh:
            steps.extend(fresh)
            d = evaluate_script(steps, x)
    return d
