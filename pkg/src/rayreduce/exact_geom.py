"""Exact integer/rational primitives for rays and lines in the plane.

Everything here is exact: coordinates are Python ints (unbounded) and
intersection points are :class:`fractions.Fraction` pairs. These predicates are
the ground truth used by certification; nothing approximate flows through them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple, Union


class NoIntersection(ValueError):
    """A line does not meet the requested region."""


@dataclass(frozen=True, order=True)
class IntPoint:
    x: int
    y: int

    def __sub__(self, other: "IntPoint") -> Tuple[int, int]:
        return (self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class RatPoint:
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "RatPoint":
        return cls(Fraction(x), Fraction(y))


PointLike = Union[IntPoint, RatPoint]


@dataclass(frozen=True)
class Direction:
    """Nonzero integer direction reduced by its gcd.

    Ray directions keep their sense; use :meth:`canonical` for unoriented
    (line) directions, which additionally fixes ``dx > 0`` or ``dx == 0, dy > 0``.
    """

    dx: int
    dy: int

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise ValueError("zero direction")
        g = gcd(self.dx, self.dy)
        if g != 1:
            object.__setattr__(self, "dx", self.dx // g)
            object.__setattr__(self, "dy", self.dy // g)

    @classmethod
    def canonical(cls, dx: int, dy: int) -> "Direction":
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        return cls(dx, dy)

    def __neg__(self) -> "Direction":
        return Direction(-self.dx, -self.dy)


@dataclass(frozen=True)
class OpenRay:
    """``{origin + t*dir : t > 0}``; the origin itself is not on the ray."""

    origin: IntPoint
    dir: Direction

    @classmethod
    def through(cls, origin: IntPoint, through: IntPoint) -> "OpenRay":
        return cls(origin, Direction(through.x - origin.x, through.y - origin.y))


@dataclass(frozen=True)
class Line:
    anchor: IntPoint
    dir: Direction

    @classmethod
    def through(cls, a: IntPoint, b: IntPoint) -> "Line":
        return cls(a, Direction.canonical(b.x - a.x, b.y - a.y))


@dataclass(frozen=True)
class BBox:
    """Closed axis-aligned box with rational bounds."""

    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    @classmethod
    def of(cls, xmin, ymin, xmax, ymax) -> "BBox":
        return cls(Fraction(xmin), Fraction(ymin), Fraction(xmax), Fraction(ymax))

    @classmethod
    def around(cls, points) -> "BBox":
        pts = list(points)
        xs = [Fraction(p.x) for p in pts]
        ys = [Fraction(p.y) for p in pts]
        return cls(min(xs), min(ys), max(xs), max(ys))

    def contains(self, p: PointLike) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orientation(a: PointLike, b: PointLike, c: PointLike) -> int:
    """+1 if ``c`` is strictly left of the directed line a->b, -1 if right, 0 if collinear."""
    return _sgn(cross(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y))


def ray_ray_intersect(r1: OpenRay, r2: OpenRay) -> bool:
    d1x, d1y = r1.dir.dx, r1.dir.dy
    d2x, d2y = r2.dir.dx, r2.dir.dy
    wx, wy = r2.origin.x - r1.origin.x, r2.origin.y - r1.origin.y
    den = cross(d1x, d1y, d2x, d2y)
    if den != 0:
        # t1 = (w x d2)/den, t2 = (w x d1)/den; both must be > 0
        s = _sgn(den)
        return _sgn(cross(wx, wy, d2x, d2y)) == s and _sgn(cross(wx, wy, d1x, d1y)) == s
    if cross(wx, wy, d1x, d1y) != 0:
        return False  # parallel, distinct supporting lines
    # collinear
    if d1x * d2x + d1y * d2y > 0:
        return True
    # opposite senses: r2 covers params (-inf, w.d1) in r1's frame
    return wx * d1x + wy * d1y > 0


def line_line_meet(l1: Line, l2: Line) -> Optional[RatPoint]:
    """Unique meeting point, or None for parallel lines (see :func:`lines_coincident`)."""
    d1x, d1y = l1.dir.dx, l1.dir.dy
    d2x, d2y = l2.dir.dx, l2.dir.dy
    den = cross(d1x, d1y, d2x, d2y)
    if den == 0:
        return None
    wx, wy = l2.anchor.x - l1.anchor.x, l2.anchor.y - l1.anchor.y
    t = Fraction(cross(wx, wy, d2x, d2y), den)
    return RatPoint(l1.anchor.x + t * d1x, l1.anchor.y + t * d1y)


def lines_coincident(l1: Line, l2: Line) -> bool:
    if cross(l1.dir.dx, l1.dir.dy, l2.dir.dx, l2.dir.dy) != 0:
        return False
    wx, wy = l2.anchor.x - l1.anchor.x, l2.anchor.y - l1.anchor.y
    return cross(wx, wy, l1.dir.dx, l1.dir.dy) == 0


def supporting_line(r: OpenRay) -> Line:
    return Line(r.origin, Direction.canonical(r.dir.dx, r.dir.dy))


def line_box_params(l: Line, box: BBox) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameter interval of ``l`` inside ``box`` (closed), or None if disjoint."""
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for a, d, mn, mx in (
        (l.anchor.x, l.dir.dx, box.xmin, box.xmax),
        (l.anchor.y, l.dir.dy, box.ymin, box.ymax),
    ):
        if d == 0:
            if not (mn <= a <= mx):
                return None
            continue
        t0, t1 = Fraction(mn - a, d), Fraction(mx - a, d)
        if t0 > t1:
            t0, t1 = t1, t0
        lo = t0 if lo is None else max(lo, t0)
        hi = t1 if hi is None else min(hi, t1)
    if lo is None or hi is None or lo > hi:
        return None
    return lo, hi


def line_to_ray(l: Line, region: BBox) -> OpenRay:
    """Ray on ``l`` whose origin lies strictly outside ``region`` and covers ``l`` ∩ region.

    The origin is ``anchor - M*dir`` with ``M`` the smallest power of two
    exceeding the required bound.
    """
    rng = line_box_params(l, region)
    if rng is None:
        raise NoIntersection(f"{l} misses {region}")
    lo = rng[0]
    # need -M < lo strictly, i.e. M > -lo
    bound = max(-lo, Fraction(0))
    m = 1
    while m <= bound:
        m <<= 1
    origin = IntPoint(l.anchor.x - m * l.dir.dx, l.anchor.y - m * l.dir.dy)
    return OpenRay(origin, l.dir)


def bit_length(p: IntPoint) -> int:
    return max(abs(p.x).bit_length(), abs(p.y).bit_length())
