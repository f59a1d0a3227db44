"""Static SVG pictures of plane configurations, clipped to an affine window."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arrangement.linear import LinearConfiguration
from .errors import PreconditionError
from .projgeom import Configuration


@dataclass(frozen=True)
class Window:
    xmin: float = 0.0
    ymin: float = 0.0
    xmax: float = 200.0
    ymax: float = 200.0
    size: int = 400  # pixels along the longer side

    @classmethod
    def around(cls, coords, margin: float = 20.0) -> "Window":
        xs = [c[0] for c in coords] or [0.0]
        ys = [c[1] for c in coords] or [0.0]
        return cls(min(xs) - margin, min(ys) - margin, max(xs) + margin, max(ys) + margin)

    def scale(self) -> float:
        return self.size / max(self.xmax - self.xmin, self.ymax - self.ymin)

    def to_px(self, x: float, y: float) -> tuple:
        s = self.scale()
        return (x - self.xmin) * s, (self.ymax - y) * s

    def contains(self, x, y, eps=1e-9) -> bool:
        return self.xmin - eps <= x <= self.xmax + eps and self.ymin - eps <= y <= self.ymax + eps


def _affine(coords):
    if coords[0] == 0:
        return None
    return float(Fraction(coords[1]) / coords[0]), float(Fraction(coords[2]) / coords[0])


def clip_line(normal, w: Window):
    """Segment of the affine line a + b x + c y = 0 inside the window, or None."""
    a, b, c = (float(v) for v in normal)
    hits = []
    if c != 0:
        for x in (w.xmin, w.xmax):
            hits.append((x, -(a + b * x) / c))
    if b != 0:
        for y in (w.ymin, w.ymax):
            hits.append((-(a + c * y) / b, y))
    inside = []
    for h in hits:
        if w.contains(*h) and all(abs(h[0] - k[0]) + abs(h[1] - k[1]) > 1e-9 for k in inside):
            inside.append(h)
    if len(inside) < 2:
        return None
    inside.sort()
    return inside[0], inside[-1]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_svg(points: Configuration | None, arrangement: LinearConfiguration | None, window: Window | None = None, show_meets: bool = False) -> str:
    """SVG with the lines of ``arrangement`` and the marked points labelled x_j."""
    amb = points.ambient if points is not None else arrangement.ambient
    if amb != 2:
        raise PreconditionError("only configurations in P^2 can be drawn")
    marks = [_affine(p.coords) for p in points.points] if points is not None else []
    if window is None:
        window = Window.around([m for m in marks if m is not None]) if marks else Window()
    s = window.scale()
    width, height = (window.xmax - window.xmin) * s, (window.ymax - window.ymin) * s
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    lines = arrangement.hyperplanes() if arrangement is not None else []
    for h in lines:
        seg = clip_line(h.normal, window)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = (window.to_px(*seg[0]), window.to_px(*seg[1]))
        out.append(f'<line class="hyperplane" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="black" stroke-width="1"/>')
    if show_meets and arrangement is not None:
        for pt in arrangement.points():
            a = _affine(pt.basis[0])
            if a is None or not window.contains(*a) or a in marks:
                continue
            cx, cy = window.to_px(*a)
            out.append(f'<circle class="meet" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="2.5" fill="none" stroke="gray"/>')
    for j, m in enumerate(marks):
        if m is None or not window.contains(*m):
            continue
        cx, cy = window.to_px(*m)
        out.append(f'<circle class="mark" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="black"/>')
        out.append(f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" font-size="12" font-style="italic">x<tspan baseline-shift="sub" font-size="9">{j}</tspan></text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
