"""Approximate real arithmetic with rigorous error radii.

An :class:`Approx` is a fixed-point number ``value / 2**bits`` together with an
error radius ``err / 2**bits``; the real quantity it stands for is guaranteed to
lie in ``[value - err, value + err]`` (scaled). Basic arithmetic and square roots
are done on Python ints, so rounding is exact and deterministic; the
transcendental functions go through mpmath at a few guard bits above the working
precision.

Only construction uses this module. Certification never looks at an Approx.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Sequence, Tuple, Union

import mpmath


class InsufficientPrecision(ArithmeticError):
    """A sign or branch could not be decided at the working precision."""


class BadFrameSize(ValueError):
    pass


class Degenerate(ValueError):
    pass


Number = Union[int, Fraction]

_GUARD = 40


@functools.lru_cache(maxsize=None)
def _ctx(bits: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits + _GUARD
    return ctx


def _round_div(a: int, b: int) -> int:
    """``a / b`` rounded to nearest, ties to even; ``b > 0``."""
    q, r = divmod(a, b)
    twice = 2 * r
    if twice > b or (twice == b and q & 1):
        q += 1
    return q


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Approx:
    value: int
    err: int
    bits: int

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, q: Number, bits: int) -> "Approx":
        q = Fraction(q)
        scaled = q * (1 << bits)
        if scaled.denominator == 1:
            return cls(scaled.numerator, 0, bits)
        return cls(_round_div(scaled.numerator, scaled.denominator), 1, bits)

    @classmethod
    def from_mpf(cls, x, bits: int, err: int = 0) -> "Approx":
        ctx = _ctx(bits)
        v = int(ctx.nint(x * ctx.ldexp(1, bits)))
        # mpmath results carry < 1 ulp at bits+_GUARD; one extra unit covers it
        return cls(v, err + 1, bits)

    # views --------------------------------------------------------------

    @property
    def scale(self) -> int:
        return 1 << self.bits

    def to_fraction(self) -> Fraction:
        return Fraction(self.value, self.scale)

    def err_fraction(self) -> Fraction:
        return Fraction(self.err, self.scale)

    def __float__(self) -> float:
        return self.value / self.scale

    def to_mpf(self):
        ctx = _ctx(self.bits)
        return ctx.ldexp(ctx.mpf(self.value), -self.bits)

    def __repr__(self) -> str:
        return f"Approx({float(self):.12g} ± {float(self.err_fraction()):.3g})"

    def contains(self, q: Number) -> bool:
        s = Fraction(q) * self.scale
        return self.value - self.err <= s <= self.value + self.err

    def overlaps(self, other: "Approx") -> bool:
        a = self.to_fraction()
        b = other.to_fraction()
        return abs(a - b) <= self.err_fraction() + other.err_fraction()

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Approx":
        if isinstance(other, Approx):
            if other.bits != self.bits:
                raise ValueError("precision mismatch")
            return other
        return Approx.exact(other, self.bits)

    def __add__(self, other) -> "Approx":
        o = self._coerce(other)
        return Approx(self.value + o.value, self.err + o.err, self.bits)

    __radd__ = __add__

    def __neg__(self) -> "Approx":
        return Approx(-self.value, self.err, self.bits)

    def __sub__(self, other) -> "Approx":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Approx":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Approx":
        if isinstance(other, int):
            return Approx(self.value * other, self.err * abs(other), self.bits)
        o = self._coerce(other)
        s = self.scale
        prod = self.value * o.value
        v = _round_div(prod, s)
        e = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return Approx(v, _ceil_div(e, s) + (prod % s != 0), self.bits)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Approx":
        o = self._coerce(other)
        if abs(o.value) <= o.err:
            raise InsufficientPrecision("division by an interval containing zero")
        s = self.scale
        num, den = self.value * s, o.value
        if den < 0:
            num, den = -num, -den
        v = _round_div(num, den)
        bv = abs(o.value)
        e = _ceil_div((self.err * bv + abs(self.value) * o.err) * s, (bv - o.err) * bv)
        return Approx(v, e + (num % den != 0), self.bits)

    def __rtruediv__(self, other) -> "Approx":
        return self._coerce(other) / self

    def sqrt(self) -> "Approx":
        lo, hi = self.value - self.err, self.value + self.err
        if hi < 0:
            raise Degenerate("square root of a negative quantity")
        s = self.scale
        v = isqrt(max(self.value, 0) * s)
        if self.err == 0 and v * v == self.value * s:
            return Approx(v, 0, self.bits)
        top = isqrt(hi * s) + 1
        bot = isqrt(max(lo, 0) * s)
        return Approx(v, max(top - v, v - bot) + 1, self.bits)

    def abs(self) -> "Approx":
        return -self if self.value < 0 else self


def sign_with_margin(x: Approx) -> Optional[int]:
    """Sign of the true value when it is certain (0 only for an exact zero), else None."""
    if x.value == 0 and x.err == 0:
        return 0
    if x.value > x.err:
        return 1
    if x.value < -x.err:
        return -1
    return None


def require_sign(x: Approx, what: str = "quantity") -> int:
    s = sign_with_margin(x)
    if s is None:
        raise InsufficientPrecision(f"sign of {what} undecided: {x!r}")
    return s


def is_exact_zero(x: Approx) -> bool:
    return x.value == 0 and x.err == 0


# transcendental helpers -------------------------------------------------


def pi(bits: int) -> Approx:
    return Approx.from_mpf(_ctx(bits).pi, bits)


def cos(x: Approx) -> Approx:
    return Approx.from_mpf(_ctx(x.bits).cos(x.to_mpf()), x.bits, err=x.err)


def sin(x: Approx) -> Approx:
    return Approx.from_mpf(_ctx(x.bits).sin(x.to_mpf()), x.bits, err=x.err)


def atan2(y: Approx, x: Approx) -> Approx:
    ctx = _ctx(x.bits)
    r2 = x.value * x.value + y.value * y.value
    r_lo = isqrt(r2) - x.err - y.err - 1
    if r_lo <= 0:
        raise InsufficientPrecision("angle of a vector indistinguishable from zero")
    e = _ceil_div((x.err + y.err) * x.scale, r_lo)
    return Approx.from_mpf(ctx.atan2(y.to_mpf(), x.to_mpf()), x.bits, err=e)


# points, circles, arcs --------------------------------------------------


@dataclass(frozen=True)
class ApproxPoint:
    x: Approx
    y: Approx

    @classmethod
    def exact(cls, x: Number, y: Number, bits: int) -> "ApproxPoint":
        return cls(Approx.exact(x, bits), Approx.exact(y, bits))

    @property
    def bits(self) -> int:
        return self.x.bits

    @property
    def err(self) -> int:
        return max(self.x.err, self.y.err)

    def __add__(self, o: "ApproxPoint") -> "ApproxPoint":
        return ApproxPoint(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "ApproxPoint") -> "ApproxPoint":
        return ApproxPoint(self.x - o.x, self.y - o.y)

    def __mul__(self, k) -> "ApproxPoint":
        return ApproxPoint(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "ApproxPoint":
        return ApproxPoint(self.x / k, self.y / k)

    def dot(self, o: "ApproxPoint") -> Approx:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "ApproxPoint") -> Approx:
        return self.x * o.y - self.y * o.x

    def norm2(self) -> Approx:
        return self.dot(self)

    def norm(self) -> Approx:
        return self.norm2().sqrt()

    def perp(self) -> "ApproxPoint":
        """Rotate by +90 degrees."""
        return ApproxPoint(-self.y, self.x)

    def as_floats(self) -> Tuple[float, float]:
        return (float(self.x), float(self.y))

    def overlaps(self, o: "ApproxPoint") -> bool:
        return self.x.overlaps(o.x) and self.y.overlaps(o.y)


def dist(a: ApproxPoint, b: ApproxPoint) -> Approx:
    return (a - b).norm()


@dataclass(frozen=True)
class ApproxLine:
    point: ApproxPoint
    dir: ApproxPoint

    @classmethod
    def through(cls, a: ApproxPoint, b: ApproxPoint) -> "ApproxLine":
        return cls(a, b - a)

    def side(self, p: ApproxPoint) -> Approx:
        """Positive when ``p`` is left of the line's direction."""
        return self.dir.cross(p - self.point)

    def at(self, t: Approx) -> ApproxPoint:
        return self.point + self.dir * t


@dataclass(frozen=True)
class CircleApprox:
    center: ApproxPoint
    radius: Approx

    def __post_init__(self):
        if self.radius.value <= self.radius.err:
            raise Degenerate("circle radius not certainly positive")

    def point_at(self, angle: Approx) -> ApproxPoint:
        return ApproxPoint(
            self.center.x + self.radius * cos(angle),
            self.center.y + self.radius * sin(angle),
        )

    def angle_of(self, p: ApproxPoint) -> Approx:
        d = p - self.center
        return atan2(d.y, d.x)


def _normalize_offset(d: Approx, two_pi: Approx) -> Approx:
    """Shift an angle difference into [0, 2π); needs a decidable sign."""
    if require_sign(d, "angle offset") < 0:
        d = d + two_pi
    return d


@dataclass(frozen=True)
class ArcApprox:
    """Counterclockwise arc from ``endpoints[0]`` to ``endpoints[1]``."""

    circle: CircleApprox
    start_angle: Approx
    end_angle: Approx
    endpoints: Tuple[ApproxPoint, ApproxPoint]

    @classmethod
    def between(cls, circle: CircleApprox, a: ApproxPoint, b: ApproxPoint) -> "ArcApprox":
        """The counterclockwise arc from ``a`` to ``b``."""
        return cls(circle, circle.angle_of(a), circle.angle_of(b), (a, b))

    @classmethod
    def minor(cls, circle: CircleApprox, a: ApproxPoint, b: ApproxPoint) -> "ArcApprox":
        """The shorter arc joining ``a`` and ``b``, oriented counterclockwise."""
        arc = cls.between(circle, a, b)
        if require_sign(arc.span() - pi(a.bits), "arc span vs pi") > 0:
            arc = cls.between(circle, b, a)
        return arc

    @property
    def bits(self) -> int:
        return self.start_angle.bits

    def span(self) -> Approx:
        return _normalize_offset(self.end_angle - self.start_angle, 2 * pi(self.bits))

    def offset_of(self, p: ApproxPoint) -> Approx:
        """Counterclockwise angle from the start endpoint to ``p``.

        The result lies in a window of width 2π centred on the arc's midpoint,
        so points on or near the arc (endpoints included) get a well-defined
        offset; the wrap-around ambiguity sits opposite the arc.
        """
        two_pi = 2 * pi(self.bits)
        d = self.circle.angle_of(p) - self.start_angle
        lo = self.span() / 2 - two_pi / 2
        if require_sign(d - lo, "angle offset") < 0:
            d = d + two_pi
        elif require_sign(d - lo - two_pi, "angle offset") >= 0:
            d = d - two_pi
        return d

    def contains_angle_offset(self, off: Approx) -> bool:
        return (require_sign(off, "arc membership") >= 0
                and require_sign(self.span() - off, "arc membership") >= 0)

    def point_at_offset(self, off: Approx) -> ApproxPoint:
        return self.circle.point_at(self.start_angle + off)

    def midpoint(self) -> ApproxPoint:
        return self.point_at_offset(self.span() / 2)


def unit_circle_point(i: int, k: int, bits: int) -> ApproxPoint:
    """``(cos(iθ), sin(iθ))`` with ``θ = (k-1)π/k``."""
    if k < 3 or k % 2 == 0:
        raise BadFrameSize(f"frame size must be odd and >= 3, got {k}")
    if bits < 32:
        raise ValueError("precision below 32 bits")
    # iθ = i(k-1)π/k; reduce the rational multiple of π mod 2 first
    frac = Fraction(i * (k - 1), k) % 2
    if frac == 0:
        return ApproxPoint.exact(1, 0, bits)
    ctx = _ctx(bits)
    ang = ctx.mpf(frac.numerator) * ctx.pi / frac.denominator
    return ApproxPoint(Approx.from_mpf(ctx.cos(ang), bits), Approx.from_mpf(ctx.sin(ang), bits))


def _solve_quadratic(a: Approx, b: Approx, c: Approx) -> List[Approx]:
    """Real roots of ``a s^2 + b s + c``, ascending; a double root is returned once."""
    sa = sign_with_margin(a)
    if sa == 0:
        if require_sign(b, "linear coefficient") == 0:
            return []
        return [-c / b]
    if sa is None:
        raise InsufficientPrecision("leading coefficient undecided")
    disc = b * b - 4 * a * c
    if is_exact_zero(disc):
        return [-b / (2 * a)]
    sd = require_sign(disc, "discriminant")
    if sd < 0:
        return []
    r = disc.sqrt()
    roots = [(-b - r) / (2 * a), (-b + r) / (2 * a)]
    if sa < 0:
        roots.reverse()
    return roots


def tangent_circle_through(a: ApproxPoint, b: ApproxPoint, l: ApproxLine, side: int) -> CircleApprox:
    """Circle through ``a`` and ``b`` tangent to ``l``.

    Of the (at most two) solutions, ``side`` picks the one whose tangency
    point lies on that side of the directed line a->b (+1 left, -1 right).
    """
    side_a, side_b = l.side(a), l.side(b)
    if is_exact_zero(side_a) or is_exact_zero(side_b):
        raise Degenerate("a point lies on the tangent line")
    if require_sign(side_a, "point-line side") != require_sign(side_b, "point-line side"):
        raise Degenerate("points on opposite sides of the line")
    mid = (a + b) / 2
    n = (b - a).perp()
    dl = l.dir
    A = dl.cross(mid - l.point)
    B = dl.cross(n)
    dn = dl.dot(n)
    h2 = (b - a).norm2() / 4
    roots = _solve_quadratic(-(dn * dn), 2 * A * B, A * A - dl.norm2() * h2)
    ab = ApproxLine.through(a, b)
    for s in roots:
        c = mid + n * s
        # foot of the perpendicular from c onto l
        t = (c - l.point).dot(dl) / dl.norm2()
        foot = l.at(t)
        if require_sign(ab.side(foot), "tangency side") == side:
            return CircleApprox(c, dist(c, a))
    raise Degenerate("no tangent circle on the requested side")


def circle_tangent_at(a: ApproxPoint, tangent: ApproxPoint, b: ApproxPoint) -> CircleApprox:
    """Circle tangent at ``a`` to direction ``tangent`` and passing through ``b``."""
    n = tangent.perp()
    ba = b - a
    den = 2 * n.dot(ba)
    if sign_with_margin(den) in (None, 0):
        raise Degenerate("second point on the tangent line")
    s = ba.norm2() / den
    c = a + n * s
    return CircleApprox(c, dist(c, a))


def line_circle_params(l: ApproxLine, c: CircleApprox) -> List[Approx]:
    """Line parameters of the intersections with the full circle, ascending."""
    f = l.point - c.center
    return _solve_quadratic(l.dir.norm2(), 2 * f.dot(l.dir), f.norm2() - c.radius * c.radius)


def line_arc_meet(l: ApproxLine, arc: ArcApprox) -> List[ApproxPoint]:
    """Intersections of a line with an arc, in increasing line parameter."""
    out = []
    for t in line_circle_params(l, arc.circle):
        p = l.at(t)
        if arc.contains_angle_offset(arc.offset_of(p)):
            out.append(p)
    return out


def line_arc_params(l: ApproxLine, arc: ArcApprox) -> List[Approx]:
    return [t for t in line_circle_params(l, arc.circle) if arc.contains_angle_offset(arc.offset_of(l.at(t)))]


def arc_spaced_points(arc: ArcApprox, start: ApproxPoint, stop: ApproxPoint, d: int) -> List[ApproxPoint]:
    """``d`` points strictly between ``start`` and ``stop`` at equal angular steps."""
    if d < 1:
        raise ValueError("d must be >= 1")
    o0, o1 = arc.offset_of(start), arc.offset_of(stop)
    step = (o1 - o0) / (d + 1)
    return [arc.point_at_offset(o0 + step * j) for j in range(1, d + 1)]


def arc_offsets_between(arc: ArcApprox, start: ApproxPoint, stop: ApproxPoint, fractions: Sequence[Fraction]) -> List[ApproxPoint]:
    o0, o1 = arc.offset_of(start), arc.offset_of(stop)
    delta = o1 - o0
    return [arc.point_at_offset(o0 + delta * f) for f in fractions]
