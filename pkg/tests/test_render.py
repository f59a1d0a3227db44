import xml.etree.ElementTree as ET

import pytest

from grassfold.arrangement import base_derived
from grassfold.errors import PreconditionError
from grassfold.fixtures import FIGURE1, FIGURE2, config
from grassfold.projgeom import Configuration
from grassfold.render import Window, clip_line, render_svg

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg)


def test_clip_line_inside_window():
    w = Window(0, 0, 10, 10)
    (x1, y1), (x2, y2) = clip_line((-5, 1, 0), w)  # x = 5
    assert x1 == x2 == 5 and {y1, y2} == {0, 10}
    assert clip_line((-20, 1, 0), w) is None
    seg = clip_line((0, 1, -1), w)  # y = x, through two corners
    assert seg == ((0, 0), (10, 10))


def test_pixel_mapping_flips_y():
    w = Window(0, 0, 100, 50, size=200)
    assert w.to_px(0, 50) == (0, 0)
    assert w.to_px(100, 0) == (200, 100)


@pytest.mark.parametrize("coords,lines", [(FIGURE1, 15), (FIGURE2, 10)])
def test_counts(coords, lines):
    x = config(coords)
    root = parse(render_svg(x, base_derived(x), Window(-200, -200, 400, 400)))
    assert len(root.findall(f"{NS}line")) == lines
    marks = [c for c in root.findall(f"{NS}circle") if c.get("class") == "mark"]
    assert len(marks) == len(coords)
    labels = ["".join(t.itertext()) for t in root.findall(f"{NS}text")]
    assert labels == [f"x{j}" for j in range(len(coords))]


def test_triple_point_drawn_as_meet():
    x = config(FIGURE1)
    svg = render_svg(x, base_derived(x), show_meets=True)
    w = Window.around(FIGURE1)
    cx, cy = w.to_px(290 / 3, 350 / 3)
    assert f'cx="{cx:.2f}" cy="{cy:.2f}"' in svg


def test_only_the_plane():
    x = Configuration.of([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    with pytest.raises(PreconditionError):
        render_svg(x, None)
