"""Figure configurations, regression templates and the JSON fixture corpus.

Coordinates are the drawn picture coordinates, read as affine points of P^2.
Some drawings contain incidences that are accidents of the picture rather
than part of the intended template; ``*_GENERIC`` variants move points by a
few units so that only the intended incidences survive.  The JSON files are
written by ``scripts/make_fixtures.py``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .arrangement.central import CentralArrangement
from .arrangement.script import Step
from .errors import SchemaError
from .projgeom import Configuration

FIGURE1 = [(80, 150), (30, 50), (130, 50), (80, 100), (180, 100), (30, 130)]
FIGURE1_PERTURBED = FIGURE1[:5] + [(30, 131)]
FIGURE1_TRIPLE = (1, "290/3", "350/3")
FIGURE2 = FIGURE1[:5]
# extra line of the left configuration: join of x_4 with x0x2 . x1x3
FIGURE3_SCRIPT = (Step(("meet", (("span", (0, 2)), ("span", (1, 3)))), (4,)),)
FIGURE3_RIGHT_LINE = (-117, 0, 1)  # y = 117 as a normal vector
FIGURE4_T1 = [(50, 50), (50, 150), (150, 150), (150, 50), (20, 125), (180, 125), (100, 35), (100, 165)]
FIGURE4_T2 = FIGURE4_T1[:4] + [(20, 100), (180, 100)] + FIGURE4_T1[6:]
FIGURE4_T1_GENERIC = [(43, 43), (52, 148), (161, 161), (139, 61), (17, 126), (183, 122), (100, 29), (100, 171)]
FIGURE4_T2_GENERIC = FIGURE4_T1_GENERIC[:4] + [(17, 103), (183, 97)] + FIGURE4_T1_GENERIC[6:]
FIGURE5_LEFT = [(50, 50), (50, 150), (150, 150), (150, 50), (100, 40), (100, 160)]
FIGURE5_RIGHT = FIGURE5_LEFT + [(0, 100)]
FIGURE5_LEFT_GENERIC = [(46, 46), (53, 147), (157, 157), (148, 52), (100, 38), (100, 163)]
FIGURE5_RIGHT_GENERIC = FIGURE5_LEFT_GENERIC + [(0, 100)]
FIGURE6_RIGHT = [FIGURE2[j] for j in (0, 1, 3, 4)]


def config(coords) -> Configuration:
    return Configuration.affine(coords)


def generic4() -> CentralArrangement:
    """Four generic planes through the origin of F^3 (not of fiber type)."""
    return CentralArrangement.of(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])


def regression_templates() -> dict:
    """Small scripted templates used by the operator-law tests (<= 6 points)."""
    from .template.scripted import build

    return {
        "p1_four": build(Configuration.of([(1, 0), (0, 1), (1, 1), (1, 3)])),
        "figure2": build(config(FIGURE2)),
        "figure3_left": build(config(FIGURE2), FIGURE3_SCRIPT),
        "figure6_right": build(config(FIGURE6_RIGHT)),
        "figure5_left": build(config(FIGURE5_LEFT_GENERIC)),
        "figure1": build(config(FIGURE1)),
    }


# --- the JSON corpus ---------------------------------------------------------


def fixture_dir() -> Path:
    env = os.environ.get("GRASSFOLD_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "fixtures"


def fixture_path(name: str) -> Path:
    p = fixture_dir() / name
    if p.suffix != ".json":
        p = p.with_suffix(".json")
    return p


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def load(name: str) -> dict:
    return load_json(fixture_path(name))


def corpus() -> dict:
    """Every fixture document, keyed by file stem."""
    from .grassmann.point import GrassPoint
    from .template.scripted import build

    docs = {
        "figure1": config(FIGURE1).to_json(),
        "figure1_perturbed": config(FIGURE1_PERTURBED).to_json(),
        "figure2": config(FIGURE2).to_json(),
        "figure3_left": build(config(FIGURE2), FIGURE3_SCRIPT).to_json(),
        "figure4_t1": build(config(FIGURE4_T1_GENERIC)).to_json(),
        "figure4_t2": build(config(FIGURE4_T2_GENERIC)).to_json(),
        "figure4_t1_drawn": config(FIGURE4_T1).to_json(),
        "figure4_t2_drawn": config(FIGURE4_T2).to_json(),
        "figure5_left": build(config(FIGURE5_LEFT_GENERIC)).to_json(),
        "figure5_right": build(config(FIGURE5_RIGHT_GENERIC)).to_json(),
        "figure5_left_drawn": build(config(FIGURE5_LEFT)).to_json(),
        "figure5_right_drawn": build(config(FIGURE5_RIGHT)).to_json(),
        "figure6_left": build(config(FIGURE2), FIGURE3_SCRIPT).to_json(),
        "figure6_right": build(config(FIGURE6_RIGHT)).to_json(),
        "p1_three": Configuration.of([(1, 0), (0, 1), (1, 1)]).to_json(),
        "collinear": Configuration.affine([(0, 0), (1, 1), (2, 2)]).to_json(),
        "single_line": {"schema": "grassfold.arrangement/1", "ambient": 2, "subspaces": [[["1", "0", "0"], ["0", "1", "1"]]]},
        "boolean3": CentralArrangement.boolean(3).to_json(),
        "braid4": CentralArrangement.braid(4).to_json(),
        "generic4": generic4().to_json(),
        "region_polys": {"schema": "grassfold.polyset/1", "polys": [f.to_json() for f in regression_polys()]},
    }
    docs["figure1_point"] = GrassPoint.from_configuration(config(FIGURE1)).to_json()
    docs["figure1_perturbed_point"] = GrassPoint.from_configuration(config(FIGURE1_PERTURBED)).to_json()
    return docs


def regression_polys() -> list:
    """Twenty nonzero polynomials in at most 3 variables of degree at most 4."""
    from .region import PolyQ

    P = PolyQ.of
    return [
        P(0, {(): 1}),
        P(1, {(0,): 7}),
        P(1, {(1,): 1, (0,): -5}),
        P(1, {(1,): 1}),
        P(1, {(2,): 1, (1,): -10, (0,): 21}),
        P(1, {(4,): "1/3", (3,): -2, (0,): 1}),
        P(1, {(3,): -1, (1,): 9}),
        P(2, {(0, 1): 1, (1, 0): -1}),
        P(2, {(0, 1): 1, (4, 0): -1}),
        P(2, {(0, 2): 1, (1, 1): -3, (2, 0): 1}),
        P(2, {(1, 1): 2, (3, 0): -5, (0, 0): 1}),
        P(2, {(0, 1): "1/2", (2, 0): -7, (1, 0): 4}),
        P(2, {(2, 2): 1, (4, 0): -1}),
        P(2, {(1, 0): 1, (0, 0): -3}),
        P(3, {(0, 0, 1): 1, (0, 1, 0): -1}),
        P(3, {(0, 0, 2): 1, (1, 1, 1): -3, (4, 0, 0): 2, (0, 2, 0): 1}),
        P(3, {(0, 0, 1): 1, (0, 3, 0): -1, (1, 0, 0): -1}),
        P(3, {(1, 1, 1): 1, (2, 2, 0): -1}),
        P(3, {(0, 1, 1): -2, (0, 2, 0): 5, (3, 0, 0): 1}),
        P(3, {(0, 0, 4): 1, (0, 4, 0): -1, (4, 0, 0): 1, (0, 0, 0): -9}),
    ]
