"""Desk-scale search for a simplicial constructible open set U^p_q.

Level q is obtained from level q-1 as follows.  Every excluded template of
level q-1 is pulled back along all face maps (coface A^i).  Over a random
point x' of U^p_(q-1) the fiber of A_0 is P^(p-1) minus the hyperplanes that
the new point x_0 must avoid: those spanned by points of x' and those
coming from pulled exclusions of the form "x_0 lies on h(x')".  That
arrangement is completed to one of fiber type; every hyperplane it adds
becomes a new exclusion "x_0 lies on h".

Exclusions are *incidence templates*: a script producing a hyperplane ``h``
from marks larger than ``a`` together with a witness in which mark ``a``
lies on ``h``.  ``meta`` records ``a`` and the step index of ``h``.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from ..arrangement.central import (
    CentralArrangement,
    FiberTypeCertificate,
    expand_factors,
    factor_poincare,
    is_fiber_type,
    poincare_polynomial,
    verify_fiber_certificate,
)
from ..arrangement.script import (
    Step,
    concat_scripts,
    evaluate_script,
    fiber_type_completion,
    map_ref,
    ref_steps,
    script_from_json,
    script_to_json,
    shift_script,
)
from ..errors import DegenerateInputError, GrassfoldError, IndeterminateError, SchemaError
from ..projgeom import Configuration, ProjPoint
from ..template.marked import template_of
from ..template.scripted import ScriptedTemplate, build, coface_A
from .point import GrassPoint, face_map, point_config, random_point
from .strata import Closure, ConstructibleSet, closure_member, in_constructible_open

SCHEMA = "grassfold.ucert/1"


@dataclass(frozen=True)
class SearchBudget:
    max_q: int | None = None  # defaults to p
    samples: int = 5  # N: sampled points per level
    agree: int = 5  # M: agreeing proxies required
    height: int = 64  # H: height of sampled coordinates
    depth: int = 3  # cap on step-dependency depth of exclusion scripts
    max_poset: int = 4000
    proxy_attempts: int = 12


# --- script helpers ----------------------------------------------------------


def prune_script(script, k: int) -> tuple:
    """Steps that step k depends on (and k itself), renumbered; k becomes last."""
    need = {k}
    for j in range(k, -1, -1):
        if j in need:
            need |= ref_steps(script[j].base)
    order = sorted(need)
    pos = {j: n for n, j in enumerate(order)}
    return tuple(Step(map_ref(script[j].base, lambda m: m, pos.__getitem__), script[j].points) for j in order)


def script_depth(script) -> int:
    depth = []
    for s in script:
        depth.append(1 + max((depth[j] for j in ref_steps(s.base)), default=0))
    return max(depth, default=0)


def _key(st: ScriptedTemplate) -> str:
    return st.digest() + json.dumps(script_to_json(st.script), sort_keys=True) + json.dumps(st.meta_dict(), sort_keys=True)


def _dedupe(templates) -> list:
    seen = {}
    for t in templates:
        seen.setdefault(_key(t), t)
    return [seen[k] for k in sorted(seen)]


def pulled_exclusions(prev: list, seed: int) -> list:
    """Coface A^i of every exclusion, for every insertion position."""
    out = []
    for t in prev:
        meta = t.meta_dict()
        for i in range(t.n_marks + 1):
            c = coface_A(t, i, seed)
            a = meta["mark"]
            new_meta = {"mark": a + 1 if i <= a else a, "step": meta["step"]}
            out.append(ScriptedTemplate(c.shape, c.template, c.script, c.witness, tuple(sorted(new_meta.items()))))
    return _dedupe(out)


def fiber_script(pulled: list) -> tuple:
    """Script over x' (marks shifted down by one) for the hyperplanes x_0 must avoid."""
    parts = []
    for t in pulled:
        meta = t.meta_dict()
        if meta["mark"] != 0:
            continue
        part = prune_script(t.script, meta["step"])
        parts.append(shift_script(part, lambda j: j - 1))
    return concat_scripts(*parts)


def random_point_on(rng: random.Random, h, height: int = 40) -> ProjPoint:
    coeffs = [Fraction(rng.randint(-height, height), rng.randint(1, 5)) for _ in h.basis]
    v = [sum(c * b[k] for c, b in zip(coeffs, h.basis)) for k in range(h.ambient + 1)]
    if not any(v):
        raise DegenerateInputError("zero combination")
    return ProjPoint.of(v)


def incidence_template(xprime: Configuration, script, seed_key: str, p: int, q: int) -> ScriptedTemplate:
    """Exclusion "x_0 lies on the hyperplane of the last step", witnessed on x'."""
    full = shift_script(script, lambda j: j + 1)
    h = evaluate_script(script, xprime).step_hyperplanes[-1]
    rng = random.Random(seed_key)
    prev = None
    for k in range(24):
        try:
            z = random_point_on(rng, h, 30 + 10 * k)
            if z in xprime.points:
                continue
            cand = build(xprime.insert(0, z), full, (p, q), (("mark", 0), ("step", len(full) - 1)))
        except DegenerateInputError:
            prev = None
            continue
        if prev is not None and prev.template == cand.template:
            return prev
        prev = cand
    raise DegenerateInputError("could not place a generic point on the hyperplane")


# --- the search --------------------------------------------------------------


def _point_json(v: GrassPoint) -> dict:
    return {"p": v.p, "q": v.q, "matrix": v.matrix.to_json()}


def _code_of(script, x: Configuration) -> str | None:
    try:
        d = evaluate_script(script, x)
    except DegenerateInputError:
        return None
    return template_of(d.configuration, x).digest()


def _member(v, u: ConstructibleSet):
    try:
        return in_constructible_open(v, u)
    except IndeterminateError:
        return None


def _sample_in(rng, u: ConstructibleSet, p: int, q: int, height: int, tries: int = 200):
    for _ in range(tries):
        v = random_point(rng, p, q, height)
        if _member(v, u):
            return v
    return None


def level_samples(u: ConstructibleSet, p: int, q: int, seed: int, budget: SearchBudget) -> list:
    """The N check samples of level q, drawn from their own seeded stream so they can be regenerated."""
    rng = random.Random(f"samples:{p}:{q}:{seed}")
    if q == 0:
        return [random_point(rng, p, 0, budget.height)]
    out = []
    for _ in range(budget.samples):
        v = _sample_in(rng, u, p, q, budget.height)
        if v is not None:
            out.append(v)
    return out


def search_u(p: int, budget: SearchBudget | None = None, seed: int = 0) -> dict:
    """Build the levels U^p_0 .. U^p_max_q and return a certificate document."""
    budget = budget or SearchBudget()
    max_q = p if budget.max_q is None else budget.max_q
    rng = random.Random(f"search:{p}:{seed}")
    levels = []
    failure = None
    excluded: list = []
    u_prev = ConstructibleSet((p, 0), ())
    v0 = level_samples(u_prev, p, 0, seed, budget)
    levels.append({"q": 0, "excluded": [], "fiber": None, "samples": [_point_json(v) for v in v0], "face_records": [], "constancy": []})
    for q in range(1, max_q + 1):
        pulled = pulled_exclusions(excluded, seed)
        base_script = fiber_script(pulled)
        accepted = None
        for attempt in range(budget.proxy_attempts):
            xp = _sample_in(rng, u_prev, p, q - 1, budget.height)
            if xp is None:
                break
            x = point_config(xp)
            try:
                d = fiber_type_completion(x, base_script)
            except DegenerateInputError:
                continue
            if len(d.configuration) > budget.max_poset:
                failure = {"level": q, "reason": "poset-budget"}
                break
            code = template_of(d.configuration, x).digest()
            agreement = []
            ok = True
            for _ in range(budget.agree):
                yp = _sample_in(rng, u_prev, p, q - 1, budget.height)
                if yp is None:
                    ok = False
                    break
                c2 = _code_of(d.script, point_config(yp))
                agreement.append({"point": _point_json(yp), "code": c2})
                if c2 != code:
                    ok = False
                    break
            if ok:
                accepted = (xp, d, code, agreement)
                break
        if failure:
            break
        if accepted is None:
            failure = {"level": q, "reason": "no-agreeing-proxy"}
            break
        xp, d, code, agreement = accepted
        x = point_config(xp)
        n = len(x)
        prefer = [x.points[n - 1 - k].coords for k in range(min(n, p))]
        cone = CentralArrangement.cone(d.configuration) if p > 1 else CentralArrangement.of(1, [])
        is_ft, cert = is_fiber_type(cone, preferred=prefer if p > 1 else ())
        if not is_ft:
            failure = {"level": q, "reason": "not-fiber-type"}
            break
        poly = poincare_polynomial(cone)
        factors = factor_poincare(poly)
        new = []
        for k in range(len(base_script), len(d.script)):
            if not d.step_grew(k):
                continue
            part = prune_script(d.script, k)
            if script_depth(part) > budget.depth:
                failure = {"level": q, "reason": "depth-budget"}
                break
            new.append(incidence_template(x, part, f"{seed}:{q}:{k}:{code}", p, q))
        if failure:
            break
        excluded = _dedupe(pulled + new)
        u = ConstructibleSet((p, q), tuple(excluded))
        samples = level_samples(u, p, q, seed, budget)
        face_records = []
        constancy = []
        for k, v in enumerate(samples):
            for i in range(p + q + 1):
                face_records.append({"sample": k, "i": i, "member": bool(_member(face_map(v, i), u_prev))})
            constancy.append({"sample": k, "code": _code_of(d.script, point_config(face_map(v, 0)))})
        levels.append(
            {
                "q": q,
                "excluded": [t.to_json() for t in excluded],
                "fiber": {
                    "proxy": _point_json(xp),
                    "script": script_to_json(d.script),
                    "base_steps": len(base_script),
                    "template_code": code,
                    "arrangement_size": len(d.configuration),
                    "hyperplanes": len(d.hyperplanes),
                    "certificate": cert.to_json(),
                    "poincare": poly,
                    "factors": factors,
                    "agreement": agreement,
                },
                "samples": [_point_json(v) for v in samples],
                "face_records": face_records,
                "constancy": constancy,
            }
        )
        if any(not r["member"] for r in face_records) or any(c["code"] != code for c in constancy):
            failure = {"level": q, "reason": "sample-check"}
            break
        u_prev = u
    doc = {
        "schema": SCHEMA,
        "p": p,
        "seed": seed,
        "budget": asdict(budget) | {"max_q": max_q},
        "complete": failure is None,
        "failure": failure,
        "levels": levels,
    }
    doc["digest"] = certificate_digest(doc)
    return doc


def certificate_digest(doc: dict) -> str:
    body = {k: v for k, v in doc.items() if k != "digest"}
    return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# --- verification ------------------------------------------------------------


def verify_certificate(doc: dict) -> list:
    """Replay every record; return a list of mismatch descriptions (empty if valid).

    Raises :class:`SchemaError` for structurally invalid documents.
    """
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError("/schema", f"expected {SCHEMA!r}")
    for key in ("p", "seed", "levels", "digest", "budget"):
        if key not in doc:
            raise SchemaError(f"/{key}", "missing")
    errs = []
    try:
        budget = SearchBudget(**doc["budget"])
    except TypeError as exc:
        raise SchemaError("/budget", str(exc)) from None
    if certificate_digest(doc) != doc["digest"]:
        errs.append("digest mismatch")
    p, seed = doc["p"], doc["seed"]
    prev_excl: list = []
    u_prev = ConstructibleSet((p, 0), ())
    for li, lv in enumerate(doc["levels"]):
        where = f"/levels/{li}"
        q = lv.get("q")
        if q != li:
            errs.append(f"{where}: level index {q} out of order")
            continue
        try:
            excluded = [ScriptedTemplate.from_json(t) for t in lv["excluded"]]
        except (SchemaError, GrassfoldError, KeyError) as exc:
            errs.append(f"{where}/excluded: {exc}")
            continue
        if q == 0:
            for k, s in enumerate(lv.get("samples", [])):
                v = GrassPoint.from_json(s, f"{where}/samples/{k}")
                if v.shape != (p, 0) or not v.is_generic():
                    errs.append(f"{where}/samples/{k}: not a generic point of shape ({p}, 0)")
            if lv.get("samples") != [_point_json(v) for v in level_samples(u_prev, p, 0, seed, budget)]:
                errs.append(f"{where}/samples: do not match the seeded sample stream")
            continue
        fib = lv.get("fiber")
        if fib is None:
            errs.append(f"{where}: missing fiber record")
            continue
        pulled = pulled_exclusions(prev_excl, seed)
        base_script = fiber_script(pulled)
        script = script_from_json(fib["script"], f"{where}/fiber/script")
        if script[: len(base_script)] != base_script or fib.get("base_steps") != len(base_script):
            errs.append(f"{where}/fiber/script: does not start with the pulled-back hyperplanes")
        keys = {_key(t) for t in excluded}
        for t in pulled:
            if _key(t) not in keys:
                errs.append(f"{where}/excluded: pulled-back template {t.digest()} missing")
        new = [t for t in excluded if _key(t) not in {_key(s) for s in pulled}]
        for t in new:
            meta = t.meta_dict()
            if meta.get("mark") != 0 or closure_member(t.witness, t) is not Closure.HOLDS:
                errs.append(f"{where}/excluded: template {t.digest()} is not an incidence template")
        xp = GrassPoint.from_json(fib["proxy"], f"{where}/fiber/proxy")
        if _member(xp, u_prev) is not True:
            errs.append(f"{where}/fiber/proxy: not in the previous level")
        x = point_config(xp)
        try:
            d = evaluate_script(script, x)
        except DegenerateInputError as exc:
            errs.append(f"{where}/fiber/script: {exc}")
            continue
        code = template_of(d.configuration, x).digest()
        if code != fib["template_code"]:
            errs.append(f"{where}/fiber: template code mismatch")
        grown = [k for k in range(len(base_script), len(script)) if d.step_grew(k)]
        want = {json.dumps(script_to_json(shift_script(prune_script(script, k), lambda j: j + 1))) for k in grown}
        have = {json.dumps(script_to_json(t.script)) for t in new}
        if want != have:
            errs.append(f"{where}/excluded: new exclusions do not match the fiber-type completion")
        cone = CentralArrangement.cone(d.configuration) if p > 1 else CentralArrangement.of(1, [])
        try:
            cert = FiberTypeCertificate.from_json(fib["certificate"])
            if not verify_fiber_certificate(cone, cert, seed=seed):
                errs.append(f"{where}/fiber/certificate: chain does not replay")
        except (KeyError, TypeError, ValueError) as exc:
            errs.append(f"{where}/fiber/certificate: {exc}")
        poly = poincare_polynomial(cone)
        if poly != fib["poincare"]:
            errs.append(f"{where}/fiber/poincare: mismatch")
        if fib["factors"] is None or expand_factors(fib["factors"]) != poly:
            errs.append(f"{where}/fiber/factors: do not multiply out to the Poincare polynomial")
        for k, rec in enumerate(fib.get("agreement", [])):
            y = GrassPoint.from_json(rec["point"], f"{where}/fiber/agreement/{k}")
            if _member(y, u_prev) is not True or _code_of(script, point_config(y)) != rec["code"] or rec["code"] != code:
                errs.append(f"{where}/fiber/agreement/{k}: mismatch")
        u = ConstructibleSet((p, q), tuple(excluded))
        samples = []
        for k, s in enumerate(lv.get("samples", [])):
            v = GrassPoint.from_json(s, f"{where}/samples/{k}")
            samples.append(v)
            if v.shape != (p, q) or not v.is_generic() or _member(v, u) is not True:
                errs.append(f"{where}/samples/{k}: not a generic point of U")
        if lv.get("samples") != [_point_json(v) for v in level_samples(u, p, q, seed, budget)]:
            errs.append(f"{where}/samples: do not match the seeded sample stream")
        for k, rec in enumerate(lv.get("face_records", [])):
            v = samples[rec["sample"]]
            got = bool(_member(face_map(v, rec["i"]), u_prev))
            if got != rec["member"] or not got:
                errs.append(f"{where}/face_records/{k}: face compatibility fails")
        for k, rec in enumerate(lv.get("constancy", [])):
            v = samples[rec["sample"]]
            if _code_of(script, point_config(face_map(v, 0))) != rec["code"] or rec["code"] != code:
                errs.append(f"{where}/constancy/{k}: fiber combinatorics differ")
        prev_excl = excluded
        u_prev = u
    return errs
