"""Command-line interface: ``grassfold <subcommand> ...``.

Exit statuses: 0 success, 1 negative answer, 2 malformed input,
3 budget exhausted.  Every command prints one JSON document (sorted keys)
with a ``"schema"`` field.  File arguments of the form ``@name`` are read
from the fixture directory (``$GRASSFOLD_FIXTURES`` overrides it).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .arrangement import (
    CentralArrangement,
    LinearConfiguration,
    base_derived,
    complete,
    factor_poincare,
    fiber_type_completion,
    is_fiber_type,
    poincare_polynomial,
    whitney_poincare,
)
from .arrangement.script import script_from_json
from .errors import DegenerateInputError, GrassfoldError, IndeterminateError, PreconditionError, SchemaError
from .fixtures import fixture_path, load_json
from .grassmann.point import GrassPoint, point_config
from .grassmann.search import SearchBudget, search_u, verify_certificate
from .grassmann.strata import closure_member, stratum_member
from .projgeom import CONFIG_SCHEMA, Configuration
from .region import PolyQ, RegionSpec, find_K, region_witness
from .render import Window, render_svg
from .template.scripted import SCHEMA as TEMPLATE_SCHEMA
from .template.scripted import ScriptedTemplate, build, coface_A, coface_B, face_A, face_B

OK, NEGATIVE, MALFORMED, BUDGET = 0, 1, 2, 3


def _read(arg: str):
    path = fixture_path(arg[1:]) if arg.startswith("@") else Path(arg)
    if not path.exists():
        raise SchemaError(str(arg), "file not found")
    return load_json(path)


def _emit(doc, out=None):
    out = out or sys.stdout
    out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def _kind(doc) -> str:
    if not isinstance(doc, dict):
        raise SchemaError("", "expected a JSON object")
    schema = doc.get("schema")
    if schema is None and "points" in doc:
        return CONFIG_SCHEMA
    if schema is None:
        raise SchemaError("/schema", "missing schema field")
    return schema


def _points(doc) -> Configuration:
    kind = _kind(doc)
    if kind == CONFIG_SCHEMA:
        return Configuration.from_json(doc)
    if kind == "grassfold.point/1":
        return point_config(GrassPoint.from_json(doc))
    if kind == TEMPLATE_SCHEMA:
        return ScriptedTemplate.from_json(doc).witness
    raise SchemaError("/schema", f"expected a configuration, point or template, got {kind!r}")


def _template(doc) -> ScriptedTemplate:
    """A scripted template; a bare configuration or point gives its base template."""
    if _kind(doc) != TEMPLATE_SCHEMA:
        return build(_points(doc))
    return ScriptedTemplate.from_json(doc)


def _linear(doc) -> LinearConfiguration:
    """A complete linear configuration from a configuration, template or arrangement file."""
    kind = _kind(doc)
    if kind == "grassfold.arrangement/1":
        return complete(LinearConfiguration.from_json(doc))
    if kind == TEMPLATE_SCHEMA:
        st = ScriptedTemplate.from_json(doc)
        from .arrangement.script import evaluate_script

        return evaluate_script(st.script, st.witness).configuration
    return base_derived(_points(doc))


def _central(doc, fiber_complete: bool = False) -> CentralArrangement:
    if _kind(doc) == "grassfold.central/1":
        return CentralArrangement.from_json(doc)
    if fiber_complete:
        if _kind(doc) == TEMPLATE_SCHEMA:
            st = ScriptedTemplate.from_json(doc)
            return CentralArrangement.cone(fiber_type_completion(st.witness, st.script).configuration)
        return CentralArrangement.cone(fiber_type_completion(_points(doc)).configuration)
    return CentralArrangement.cone(_linear(doc))


# --- commands ----------------------------------------------------------------


def cmd_derive(a):
    x = _points(_read(a.file))
    h = base_derived(x)
    return OK, h.to_json() | {"hyperplanes": len(h.hyperplanes())}


def cmd_complete(a):
    doc = _read(a.file)
    if a.fiber_type:
        kind = _kind(doc)
        st = ScriptedTemplate.from_json(doc) if kind == TEMPLATE_SCHEMA else None
        x = st.witness if st else _points(doc)
        d = fiber_type_completion(x, st.script if st else ())
        return OK, build(x, d.script).to_json()
    h = _linear(doc)
    return OK, h.to_json() | {"hyperplanes": len(h.hyperplanes())}


def cmd_template(a):
    doc = _read(a.file)
    if _kind(doc) == TEMPLATE_SCHEMA:
        return OK, ScriptedTemplate.from_json(doc).to_json()
    x = _points(doc)
    script = script_from_json(_read(a.script)) if a.script else ()
    return OK, build(x, script).to_json()


def cmd_face(a):
    st = _template(_read(a.file))
    op = face_A if a.op == "A" else face_B
    return OK, op(st, a.i).to_json()


def cmd_coface(a):
    st = _template(_read(a.file))
    op = coface_A if a.op == "A" else coface_B
    return OK, op(st, a.i, a.seed).to_json()


def cmd_fibertype(a):
    arr = _central(_read(a.file), a.complete)
    ok, res = is_fiber_type(arr)
    doc = {"schema": "grassfold.fibertype/1", "fiber_type": ok, "arrangement": arr.to_json()}
    if ok:
        poly = poincare_polynomial(arr)
        doc |= {"certificate": res.to_json(), "poincare": poly, "factors": factor_poincare(poly), "exponents": res.exponents()}
        return OK, doc
    return NEGATIVE, doc | {"refutation": res.to_json()}


def cmd_poincare(a):
    arr = _central(_read(a.file), a.complete)
    poly = poincare_polynomial(arr)
    doc = {"schema": "grassfold.poincare/1", "poincare": poly, "factors": factor_poincare(poly), "hyperplanes": len(arr)}
    if a.check:
        doc["whitney"] = whitney_poincare(arr)
        if doc["whitney"] != poly:
            return NEGATIVE, doc
    return OK, doc


def cmd_member(a):
    x = _points(_read(a.point))
    st = _template(_read(a.template))
    if a.mode == "stratum":
        verdict = "holds" if stratum_member(x, st) else "fails"
    else:
        verdict = closure_member(x, st).value
    doc = {"schema": "grassfold.member/1", "mode": a.mode, "verdict": verdict, "template": st.digest()}
    return (OK if verdict == "holds" else NEGATIVE), doc


def _budget(a) -> SearchBudget:
    return SearchBudget(max_q=a.max_q, samples=a.budget_samples, height=a.height, depth=a.budget_depth)


def cmd_search_u(a):
    doc = search_u(a.p, _budget(a), a.seed)
    return (OK if doc["complete"] else BUDGET), doc


def cmd_verify_cert(a):
    doc = _read(a.file)
    errs = verify_certificate(doc)
    out = {"schema": "grassfold.verify/1", "valid": not errs, "mismatches": errs, "digest": doc.get("digest")}
    return (OK if not errs else NEGATIVE), out


def _poly(arg):
    doc = _read(arg)
    return PolyQ.from_json(doc)


def cmd_region_k(a):
    f = _poly(a.poly)
    if f.is_zero():
        raise SchemaError("/terms", "the zero polynomial has no region")
    return OK, find_K(f).to_json()


def cmd_region_check(a):
    f = _poly(a.poly)
    spec = RegionSpec.from_json(_read(a.spec)) if a.spec else find_K(f)
    rep = region_witness(f, spec, a.samples, a.seed)
    doc = rep.to_json() | {"spec": spec.to_json(), "seed": a.seed}
    return (NEGATIVE if rep.violation else OK), doc


def cmd_render(a):
    doc = _read(a.file)
    kind = _kind(doc)
    pts = None if kind == "grassfold.arrangement/1" else _points(doc)
    arr = _linear(doc)
    win = Window(*a.window) if a.window else None
    svg = render_svg(pts, arr, win, show_meets=a.meets)
    Path(a.out).write_text(svg)
    return OK, {
        "schema": "grassfold.render/1",
        "out": str(a.out),
        "lines": svg.count('class="hyperplane"'),
        "points": svg.count('class="mark"'),
    }


# --- parser ------------------------------------------------------------------


def _global_flags(p, seed, depth, samples, height):
    p.add_argument("--seed", type=int, default=seed, help="seed for every random choice (recorded in outputs)")
    p.add_argument("--budget-depth", type=int, default=depth, help="max step-dependency depth of exclusion scripts")
    p.add_argument("--budget-samples", type=int, default=samples, help="sampled points per search level")
    p.add_argument("--height", type=int, default=height, help="height of sampled rational coordinates")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grassfold", description="Exact computations with point configurations and templates.")
    p.add_argument("--version", action="version", version=__version__)
    _global_flags(p, 0, 3, 5, 64)
    # the same flags are accepted after the subcommand; SUPPRESS keeps the top-level values
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, *[argparse.SUPPRESS] * 4)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    sp = add("derive", cmd_derive, "base derived configuration of a point configuration")
    sp.add_argument("file")
    sp = add("complete", cmd_complete, "completion, or fiber-type completion with --fiber-type")
    sp.add_argument("file")
    sp.add_argument("--fiber-type", action="store_true")
    sp = add("template", cmd_template, "scripted template of a configuration (optionally with --script)")
    sp.add_argument("file")
    sp.add_argument("--script")
    for name, fn in (("face", cmd_face), ("coface", cmd_coface)):
        sp = add(name, fn, f"{name} operator A or B at index i")
        sp.add_argument("file")
        sp.add_argument("--op", choices=["A", "B"], default="A")
        sp.add_argument("-i", type=int, required=True)
    for name, fn in (("fibertype", cmd_fibertype), ("poincare", cmd_poincare)):
        sp = add(name, fn, "fiber-type certificate or refutation" if name == "fibertype" else "Poincare polynomial and factors")
        sp.add_argument("file")
        sp.add_argument("--complete", action="store_true", help="use the fiber-type completion of a configuration")
        if name == "poincare":
            sp.add_argument("--check", action="store_true", help="cross-check against the Whitney subset sum")
    sp = add("member", cmd_member, "stratum or closure membership of a point")
    sp.add_argument("point")
    sp.add_argument("template")
    sp.add_argument("--mode", choices=["stratum", "closure"], default="stratum")
    sp = add("search-u", cmd_search_u, "search for U^p_q and emit a certificate")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--max-q", type=int, default=None)
    sp = add("verify-cert", cmd_verify_cert, "replay a search certificate")
    sp.add_argument("file")
    sp = add("region-k", cmd_region_k, "find K and C for a polynomial")
    sp.add_argument("--poly", required=True)
    sp = add("region-check", cmd_region_check, "sample the region and check |f| >= C")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--spec")
    sp.add_argument("--samples", type=int, default=1000)
    sp = add("render", cmd_render, "SVG picture of a plane configuration")
    sp.add_argument("file")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "YMIN", "XMAX", "YMAX"))
    sp.add_argument("--meets", action="store_true", help="also draw intersection points")
    return p


def _error(status, location, message):
    return status, {"schema": "grassfold.error/1", "status": status, "location": location, "message": message}


def run(argv=None) -> tuple:
    """Parse and execute; return ``(status, document)``."""
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SchemaError as exc:
        return _error(MALFORMED, exc.location, exc.message)
    except (DegenerateInputError, PreconditionError) as exc:
        return _error(MALFORMED, "", str(exc))
    except IndeterminateError as exc:
        return _error(NEGATIVE, "", str(exc))
    except GrassfoldError as exc:
        return _error(MALFORMED, "", str(exc))


def main(argv=None) -> int:
    try:
        status, doc = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return MALFORMED if exc.code else OK
    _emit(doc)
    if status == MALFORMED:
        print(f"grassfold: {doc.get('location', '')}: {doc.get('message', '')}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
