"""Scripted templates and the face/coface operators A_i, A^i, B_i, B^i.

A scripted template pairs a marked template with a derivation script and a
witness configuration on which the script produces exactly that template.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..arrangement.script import (
    Derivation,
    Step,
    derive_script,
    drop_mark,
    evaluate_script,
    insert_mark,
    map_ref,
    ref_steps,
    script_from_json,
    script_to_json,
)
from ..errors import DegenerateInputError, PreconditionError, SchemaError, ScriptDegeneracy
from ..projgeom import Configuration, ProjPoint, project_from_point, project_subspace
from .marked import MarkedTemplate, template_of

SCHEMA = "grassfold.template/1"


@dataclass(frozen=True)
class ScriptedTemplate:
    shape: tuple
    template: MarkedTemplate
    script: tuple
    witness: Configuration
    meta: tuple = field(default=(), compare=False)

    @property
    def p(self) -> int:
        return self.shape[0]

    @property
    def q(self) -> int:
        return self.shape[1]

    @property
    def n_marks(self) -> int:
        return self.p + self.q + 1

    @property
    def code(self) -> tuple:
        return self.template.code

    def digest(self) -> str:
        return self.template.digest()

    def meta_dict(self) -> dict:
        return dict(self.meta)

    def same_template(self, other: "ScriptedTemplate") -> bool:
        return self.shape == other.shape and self.template == other.template

    def to_json(self) -> dict:
        out = {"schema": SCHEMA, "shape": list(self.shape)}
        out.update(self.template.to_json())
        out["script"] = script_to_json(self.script)
        out["witness"] = self.witness.to_json()
        if self.meta:
            out["meta"] = dict(self.meta)
        return out

    @classmethod
    def from_json(cls, obj, validate: bool = True) -> "ScriptedTemplate":
        if not isinstance(obj, dict):
            raise SchemaError("", "template document must be an object")
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise SchemaError("/schema", f"expected {SCHEMA!r}")
        shape = obj.get("shape")
        if not (isinstance(shape, list) and len(shape) == 2 and all(isinstance(v, int) for v in shape)):
            raise SchemaError("/shape", "expected [p, q]")
        witness = configuration_from_json(obj.get("witness"), "/witness")
        script = script_from_json(obj.get("script", []))
        meta = tuple(sorted((obj.get("meta") or {}).items()))
        st = build(witness, script, tuple(shape), meta)
        if validate and "elements" in obj:
            claimed = MarkedTemplate.from_json(obj, "")
            if claimed != st.template:
                raise SchemaError("/elements", "stored template does not match the script evaluated on the witness")
        return st


def configuration_from_json(obj, where="") -> Configuration:
    return Configuration.from_json(obj, where)


def default_shape(x: Configuration) -> tuple:
    p = x.ambient + 1
    return (p, len(x) - p - 1)


def build(x: Configuration, script=(), shape=None, meta=()) -> ScriptedTemplate:
    """Evaluate ``script`` on ``x`` and package the resulting template."""
    shape = tuple(shape) if shape is not None else default_shape(x)
    if shape != default_shape(x):
        raise PreconditionError(f"configuration does not have shape {shape}")
    d = evaluate_script(script, x)
    return ScriptedTemplate(shape, template_of(d.configuration, x), tuple(script), x, tuple(meta))


def template_of_derivation(d: Derivation) -> MarkedTemplate:
    return template_of(d.configuration, d.points)


def realizes(x: Configuration, st: ScriptedTemplate) -> bool:
    """Whether the script replays on ``x`` and yields exactly ``st``'s template."""
    if default_shape(x) != st.shape:
        raise PreconditionError("shape mismatch")
    try:
        d = evaluate_script(st.script, x)
    except ScriptDegeneracy:
        return False
    return template_of(d.configuration, x) == st.template


# --- operators ---------------------------------------------------------------


def _rng(st: ScriptedTemplate, tag: str, i: int, seed: int) -> random.Random:
    return random.Random(f"{seed}:{tag}:{i}:{st.digest()}:{script_to_json(st.script)}")


def random_point(rng: random.Random, ambient: int, height: int = 40) -> ProjPoint:
    return ProjPoint.of([1] + [Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(ambient)])


def _agreeing(make, attempts: int = 24):
    """Call ``make(k)`` until two consecutive successful draws give the same template."""
    prev = None
    for k in range(attempts):
        try:
            cand = make(k)
        except DegenerateInputError:
            prev = None
            continue
        if prev is not None and prev.template == cand.template:
            return prev
        prev = cand
    raise DegenerateInputError("could not find a generic extension point")


def coface_A(st: ScriptedTemplate, i: int, seed: int = 0) -> ScriptedTemplate:
    """A^i T: insert a generic new mark at position i."""
    n = st.n_marks
    if not 0 <= i <= n:
        raise PreconditionError(f"index {i} out of range 0..{n}")
    script = insert_mark(st.script, i)
    rng = _rng(st, "A", i, seed)

    def make(k):
        z = random_point(rng, st.witness.ambient, 30 + 10 * k)
        if z in st.witness.points:
            raise DegenerateInputError("repeated point")
        return build(st.witness.insert(i, z), script, (st.p, st.q + 1))

    return _agreeing(make)


def face_A(st: ScriptedTemplate, i: int) -> ScriptedTemplate:
    """A_i T: forget mark i and every step that depends on it."""
    if st.q < 1:
        raise PreconditionError("face_A needs q >= 1")
    if not 0 <= i < st.n_marks:
        raise PreconditionError(f"index {i} out of range")
    script = list(drop_mark(st.script, i))
    x = st.witness.delete(i)
    while True:
        try:
            return build(x, script, (st.p, st.q - 1))
        except ScriptDegeneracy as exc:
            if exc.step is None:
                raise
            script = list(_remove_step(script, exc.step))


def _remove_step(script, k):
    """Drop step k and every later step depending on it; renumber step refs."""
    dropped = {k}
    kept = {}
    out = []
    for j, s in enumerate(script):
        if j in dropped or ref_steps(s.base) & dropped:
            dropped.add(j)
            continue
        kept[j] = len(out)
        out.append(Step(map_ref(s.base, lambda m: m, kept.__getitem__), s.points))
    return out


def pull_back_ref(ref, apex: int, shift):
    kind, arg = ref
    if kind == "span":
        return ("span", tuple(sorted([shift(j) for j in arg] + [apex])))
    if kind == "meet":
        return ("meet", tuple(pull_back_ref(r, apex, shift) for r in arg))
    return ref


def coface_B(st: ScriptedTemplate, i: int, seed: int = 0) -> ScriptedTemplate:
    """B^i T: cone over the configuration with apex as the new mark i, one dimension up."""
    n = st.n_marks
    if not 0 <= i <= n:
        raise PreconditionError(f"index {i} out of range 0..{n}")
    shift = lambda j: j + 1 if j >= i else j  # noqa: E731
    script = tuple(
        Step(pull_back_ref(s.base, i, shift), tuple(shift(j) for j in s.points)) for s in st.script
    )
    m = st.witness.ambient
    apex = ProjPoint.of([0] * (m + 1) + [1])
    rng = _rng(st, "B", i, seed)

    def make(k):
        h = 30 + 10 * k
        lifted = [ProjPoint.of(tuple(pt.coords) + (Fraction(rng.randint(-h, h), rng.randint(1, 3)),)) for pt in st.witness.points]
        pts = lifted[:i] + [apex] + lifted[i:]
        return build(Configuration(m + 1, tuple(pts)), script, (st.p + 1, st.q))

    return _agreeing(make)


def face_B(st: ScriptedTemplate, i: int) -> ScriptedTemplate:
    """B_i T: project the witness from mark i and keep the hyperplanes through it."""
    if st.p < 2:
        raise PreconditionError("face_B needs p >= 2")
    if not 0 <= i < st.n_marks:
        raise PreconditionError(f"index {i} out of range")
    x = st.witness
    z = project_from_point(x, i)
    shape = (st.p - 1, st.q)
    if z.ambient == 0:
        return build(z, (), shape)
    d = evaluate_script(st.script, x)
    center = x.points[i].coords
    targets = set()
    for h in d.hyperplanes:
        if h.contains_vector(center):
            img = project_subspace(h, center)
            if img is not None and img.is_hyperplane():
                targets.add(img)
    try:
        script = derive_script(z, targets)
    except PreconditionError as exc:
        raise DegenerateInputError(f"projected arrangement is not derived from the projected points: {exc}") from None
    return build(z, script, shape)
