"""Deterministic SVG drawings of the frame and of integer ray scenes.

Floating point is used for display only. Rays are clipped to the viewport with
exact rational arithmetic first, so far-away origins (exported lines) still
draw correctly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .exact_geom import BBox, IntPoint, Line, OpenRay, line_box_params
from .frame import Frame, build_frame

_DISPLAY_BITS = 64


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    def __init__(self, box: Tuple[float, float, float, float], width: int):
        self.x0, self.y0, self.x1, self.y1 = box
        self.width = width
        self.scale = width / (self.x1 - self.x0)
        self.height = int(round((self.y1 - self.y0) * self.scale))
        self.items: List[str] = []

    def pt(self, x: float, y: float) -> Tuple[str, str]:
        return _f((x - self.x0) * self.scale), _f((self.y1 - y) * self.scale)

    def add(self, s: str) -> None:
        self.items.append(s)

    def svg(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        style = (
            "<style>.frame{stroke:#999;fill:none;stroke-width:0.8}.arc{stroke:#1f5fbf;fill:none;stroke-width:1.6}"
            ".ray{stroke:#c0392b;stroke-width:0.9}.line{stroke:#27ae60;stroke-width:0.9}"
            ".origin{fill:#c0392b}text{font-family:monospace;font-size:11px}</style>"
        )
        return "\n".join([head, style, '<rect width="100%" height="100%" fill="white"/>', *self.items, "</svg>"]) + "\n"


def _frame_box(f: Frame) -> Tuple[float, float, float, float]:
    pts = [p.as_floats() for p in f.points]
    for R in f.rects.values():
        pts += [R.q.as_floats(), R.t.as_floats(), R.r.as_floats()]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    m = 0.15 * max(max(xs) - min(xs), max(ys) - min(ys))
    return min(xs) - m, min(ys) - m, max(xs) + m, max(ys) + m


def _draw_frame(c: _Canvas, f: Frame, labels: bool) -> None:
    for i in range(f.k):
        x, y = f.points[i].as_floats()
        px, py = c.pt(x, y)
        c.add(f'<circle id="p{i}" cx="{px}" cy="{py}" r="2.5" fill="#333"/>')
        if labels:
            c.add(f'<text x="{px}" y="{py}" dx="4" dy="-4">p{i}</text>')
    for i, R in sorted(f.rects.items()):
        corners = [R.p, R.t, R.q, R.r]
        pts = " ".join(",".join(c.pt(*p.as_floats())) for p in corners)
        c.add(f'<polygon id="R{i}" class="frame" points="{pts}"/>')
        if labels:
            mx, my = c.pt(*R.m.as_floats())
            c.add(f'<text x="{mx}" y="{my}" fill="#777">R{i}</text>')
    for i, arc in sorted(f.arcs.items()):
        a, b = arc.endpoints
        ax, ay = c.pt(*a.as_floats())
        bx, by = c.pt(*b.as_floats())
        rad = _f(float(arc.circle.radius) * c.scale)
        # counterclockwise in the plane is clockwise on screen (y flipped)
        c.add(f'<path id="alpha{i}" class="arc" d="M {ax} {ay} A {rad} {rad} 0 0 0 {bx} {by}"/>')
        if labels:
            mx, my = c.pt(*arc.midpoint().as_floats())
            c.add(f'<text x="{mx}" y="{my}" dx="6" fill="#1f5fbf">α{i}</text>')


def _visible(r: OpenRay, box: BBox) -> Optional[Tuple[Fraction, Fraction]]:
    rng = line_box_params(Line(r.origin, r.dir), box)
    if rng is None:
        return None
    lo, hi = max(rng[0], Fraction(0)), rng[1]
    return (lo, hi) if lo < hi else None


def _draw_rays(c: _Canvas, rays: Sequence[Tuple[str, OpenRay, bool]], B: int, labels: bool) -> None:
    s = 1 << B
    box = BBox.of(Fraction(c.x0) * s, Fraction(c.y0) * s, Fraction(c.x1) * s, Fraction(c.y1) * s)
    for name, r, is_line in rays:
        vis = _visible(r, box)
        if vis is None:
            continue
        lo, hi = vis
        (ax, ay), (bx, by) = [
            c.pt(float((r.origin.x + t * r.dir.dx) / s), float((r.origin.y + t * r.dir.dy) / s)) for t in (lo, hi)
        ]
        cls = "line" if is_line else "ray"
        c.add(f'<line class="{cls}" data-vertex="{escape(name)}" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
        if lo == 0:
            ox, oy = c.pt(float(Fraction(r.origin.x, s)), float(Fraction(r.origin.y, s)))
            c.add(f'<circle class="origin" cx="{ox}" cy="{oy}" r="1.8"/>')
            if labels:
                c.add(f'<text x="{ox}" y="{oy}" dx="3" dy="10" fill="#c0392b">{escape(name)}</text>')


def render_svg(k: Optional[int] = None, rays: Iterable[Tuple[str, OpenRay, bool]] = (), scale_bits: int = 0,
               width: int = 800, labels: bool = True) -> str:
    rays = list(rays)
    if k is not None:
        f = build_frame(k, _DISPLAY_BITS)
        box = _frame_box(f)
    else:
        f = None
        if not rays:
            raise ValueError("nothing to render")
        s = 1 << scale_bits
        pts = [(r.origin.x / s, r.origin.y / s) for _, r, line in rays if not line]
        xs, ys = [p[0] for p in pts] or [-1.0, 1.0], [p[1] for p in pts] or [-1.0, 1.0]
        m = 0.15 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        box = (min(xs) - m, min(ys) - m, max(xs) + m, max(ys) + m)
    c = _Canvas(box, width)
    if f is not None:
        _draw_frame(c, f, labels)
    if rays:
        _draw_rays(c, rays, scale_bits, labels)
    return c.svg()
