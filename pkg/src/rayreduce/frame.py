"""The reference frame: unit-circle points, thin rectangles and flat arcs.

For odd ``k`` the points ``p_i = (cos iθ, sin iθ)``, ``θ = (k-1)π/k``, trace a
star polygon. Each ``i`` in ``1..k-2`` gets a thin rectangle ``R_i`` with
diagonal ``p_i q_i`` (``q_i = 2 p_i - p_{i+1}``) whose other diagonal ``t_i r_i``
is aimed at ``q_{i+1}``. The arc ``α_i`` runs across the long side ``q_i r_i``
and is tangent to diagonal ``p_i q_i`` at ``q_i`` and to diagonal ``t_i r_i`` at
``r_i``. Every line that cuts ``α_i`` twice or touches it also crosses
``α_{i+1}``, which is what the ray classes below rely on.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .realfield import (
    Approx,
    ApproxLine,
    ApproxPoint,
    ArcApprox,
    BadFrameSize,
    CircleApprox,
    InsufficientPrecision,
    circle_tangent_at,
    dist,
    is_exact_zero,
    line_circle_params,
    require_sign,
    sign_with_margin,
    unit_circle_point,
)


@dataclass(frozen=True)
class Rectangle:
    p: ApproxPoint
    t: ApproxPoint
    q: ApproxPoint
    r: ApproxPoint

    @property
    def m(self) -> ApproxPoint:
        return (self.p + self.q) / 2


@dataclass
class Frame:
    k: int
    bits: int
    points: List[ApproxPoint]  # p_0 .. p_k (p_k == p_0)
    rects: Dict[int, Rectangle]  # 1 .. k-2
    arcs: Dict[int, ArcApprox]  # 1 .. k-2

    @property
    def theta_fraction(self) -> Fraction:
        """θ as a multiple of π."""
        return Fraction(self.k - 1, self.k)

    @property
    def n_arcs(self) -> int:
        return self.k - 2

    def arc(self, i: int) -> ArcApprox:
        return self.arcs[i]

    def residuals(self) -> Dict[str, float]:
        """Largest incidence and congruence defects, as floats."""
        worst = {"mt_vs_mp": 0.0, "p_next_on_pq": 0.0, "q_next_on_rt": 0.0, "diagonal_length": 0.0}
        diag = dist(self.points[0], self.points[1])
        for i, R in self.rects.items():
            m = R.m
            worst["mt_vs_mp"] = max(worst["mt_vs_mp"], abs(float(dist(m, R.t) - dist(m, R.p))))
            lpq = ApproxLine.through(R.p, R.q)
            worst["p_next_on_pq"] = max(worst["p_next_on_pq"], abs(float(lpq.side(self.points[i + 1]) / lpq.dir.norm())))
            lrt = ApproxLine.through(R.r, R.t)
            qn = 2 * self.points[i + 1] - self.points[i + 2]
            worst["q_next_on_rt"] = max(worst["q_next_on_rt"], abs(float(lrt.side(qn) / lrt.dir.norm())))
            for a, b in ((R.p, R.q), (R.t, R.r)):
                worst["diagonal_length"] = max(worst["diagonal_length"], abs(float(dist(a, b) - diag)))
        return worst


class FrameTooShallow(ValueError):
    pass


def frame_size_for_depth(depth: int) -> int:
    """Smallest odd k >= 5 whose arcs reach level ``depth`` (origins on α_{depth+1})."""
    k = max(5, depth + 3)
    return k if k % 2 else k + 1


@functools.lru_cache(maxsize=32)
def build_frame(k: int, bits: int) -> Frame:
    if k % 2 == 0 or k < 5:
        raise BadFrameSize(f"frame size must be odd and >= 5, got {k}")
    pts = [unit_circle_point(i % k, k, bits) for i in range(k + 1)]
    q = {i: 2 * pts[i] - pts[i + 1] for i in range(1, k)}
    rects: Dict[int, Rectangle] = {}
    arcs: Dict[int, ArcApprox] = {}
    for i in range(1, k - 1):
        p_i, q_i = pts[i], q[i]
        m = (p_i + q_i) / 2
        rho = dist(m, p_i)
        away = m - q[i + 1]
        unit = away / away.norm()
        c1, c2 = m + unit * rho, m - unit * rho
        # t_i is the candidate farther from q_{i+1}
        if require_sign(dist(c1, q[i + 1]) - dist(c2, q[i + 1]), "t_i choice") > 0:
            t = c1
        else:
            t = c2
        r = 2 * m - t
        rects[i] = Rectangle(p_i, t, q_i, r)
        circle = circle_tangent_at(q_i, q_i - p_i, r)
        arcs[i] = ArcApprox.minor(circle, q_i, r)
    return Frame(k, bits, pts, rects, arcs)


# ray classes -------------------------------------------------------------


@dataclass(frozen=True)
class ApproxRay:
    origin: ApproxPoint
    dir: ApproxPoint

    @property
    def line(self) -> ApproxLine:
        return ApproxLine(self.origin, self.dir)

    @classmethod
    def through(cls, origin: ApproxPoint, through: ApproxPoint) -> "ApproxRay":
        return cls(origin, through - origin)


@dataclass(frozen=True)
class RayClassQuery:
    frame: Frame
    index: int


def on_arc(arc: ArcApprox, p: ApproxPoint, tol: Fraction) -> bool:
    gap = dist(p, arc.circle.center) - arc.circle.radius
    if require_sign(gap.abs() - Approx.exact(tol, p.bits), "distance to arc") > 0:
        return False
    return arc.contains_angle_offset(arc.offset_of(p))


def _hits_ahead(ray: ApproxRay, arc: ArcApprox) -> int:
    """Number of points of ``arc`` on the open ray; a touching ray counts as 2."""
    l = ray.line
    f = l.point - arc.circle.center
    a = l.dir.norm2()
    b = 2 * f.dot(l.dir)
    c = f.norm2() - arc.circle.radius * arc.circle.radius
    disc = b * b - 4 * a * c
    sd = sign_with_margin(disc)
    if sd is None or is_exact_zero(disc):
        t = -b / (2 * a)
        if require_sign(t, "tangency parameter") > 0 and arc.contains_angle_offset(arc.offset_of(l.at(t))):
            return 2
        return 0
    if sd < 0:
        return 0
    hits = 0
    for t in line_circle_params(l, arc.circle):
        if require_sign(t, "hit parameter") > 0 and arc.contains_angle_offset(arc.offset_of(l.at(t))):
            hits += 1
    return hits


def gamma_membership(q: RayClassQuery, ray: ApproxRay, tol: Optional[Fraction] = None) -> bool:
    """Whether ``ray`` is in Γ_i; raises InsufficientPrecision when undecidable."""
    f, i = q.frame, q.index
    if tol is None:
        tol = Fraction(1, 1 << (f.bits // 2))
    if i == 0:
        if not on_arc(f.arcs[1], ray.origin, tol):
            return False
        to_p0 = f.points[0] - ray.origin
        c = ray.dir.cross(to_p0)
        if require_sign(c.abs() - Approx.exact(tol, f.bits) * ray.dir.norm() * to_p0.norm(), "alignment with p_0") > 0:
            return False
        return require_sign(ray.dir.dot(to_p0), "direction towards p_0") > 0
    if i + 1 > f.n_arcs:
        raise ValueError(f"class Γ_{i} needs arc α_{i + 1}, frame has {f.n_arcs} arcs")
    if not on_arc(f.arcs[i + 1], ray.origin, tol):
        return False
    return _hits_ahead(ray, f.arcs[i]) >= 2


def rays_cross(a: ApproxRay, b: ApproxRay) -> bool:
    """Approximate open-ray intersection decided with margin (non-parallel rays only)."""
    den = a.dir.cross(b.dir)
    w = b.origin - a.origin
    s = require_sign(den, "ray crossing determinant")
    if s == 0:
        raise InsufficientPrecision("parallel rays")
    return require_sign(w.cross(b.dir), "first ray parameter") == s and require_sign(w.cross(a.dir), "second ray parameter") == s


def line_meets_arc(l: ApproxLine, arc: ArcApprox) -> bool:
    for t in line_circle_params(l, arc.circle):
        if arc.contains_angle_offset(arc.offset_of(l.at(t))):
            return True
    return False


# sampling & validation -----------------------------------------------------


def tangent_at(arc: ArcApprox, p: ApproxPoint) -> ApproxPoint:
    return (p - arc.circle.center).perp()


def _arc_point(arc: ArcApprox, u: float) -> ApproxPoint:
    return arc.point_at_offset(arc.span() * Fraction(u))


def sample_class(f: Frame, i: int, count: int, rng: random.Random, tangent_share: float = 0.3) -> List[ApproxRay]:
    """Random members of Γ_i, biased towards near-tangent rays.

    May return fewer than ``count`` rays when few lines through α_i reach α_{i+1}.
    """
    out: List[ApproxRay] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count + 100:
            break
        if i == 0:
            o = _arc_point(f.arcs[1], rng.uniform(0.02, 0.98))
            out.append(ApproxRay.through(o, f.points[0]))
            continue
        arc = f.arcs[i]
        u1 = rng.uniform(0.0, 1.0)
        y1 = _arc_point(arc, u1)
        if rng.random() < tangent_share:
            d = tangent_at(arc, y1)
        else:
            # near-tangent secants: log-uniform spread of the second point
            u2 = min(1.0, max(0.0, u1 + rng.choice((-1, 1)) * 10 ** rng.uniform(-6, 0)))
            if u2 == u1:
                continue
            d = _arc_point(arc, u2) - y1
        line = ApproxLine(y1, d)
        try:
            ts = [t for t in line_circle_params(line, f.arcs[i + 1].circle)]
            ts = [t for t in ts if f.arcs[i + 1].contains_angle_offset(f.arcs[i + 1].offset_of(line.at(t)))]
            if not ts:
                continue
            o = line.at(ts[rng.randrange(len(ts))])
            ray = ApproxRay.through(o, y1)
            if gamma_membership(RayClassQuery(f, i), ray):
                out.append(ray)
        except InsufficientPrecision:
            continue
    return out


@dataclass
class FrameReport:
    k: int
    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)
    ambiguous: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.ambiguous


def validate_frame(f: Frame, samples: int, seed: int = 0) -> FrameReport:
    """Sampled check of the frame's intersection properties.

    * rays of Γ_i and Γ_j cross whenever |i - j| > 1;
    * a ray touching α_{i+1} at x crosses every Γ_i ray not starting at x;
    * every secant or tangent line of α_i meets α_{i+1}.
    """
    rng = random.Random(seed)
    rep = FrameReport(f.k)
    classes = {i: sample_class(f, i, samples, rng) for i in range(0, f.n_arcs)}
    for i, rays in classes.items():
        rep.checked[f"sample Γ{i}"] = 1
        if len(rays) < samples:
            rep.failures.append(f"sample Γ{i}: only {len(rays)} of {samples} lines through α{i} reach α{i + 1}")

    def tally(name: str, ok_fn):
        rep.checked[name] = rep.checked.get(name, 0) + 1
        try:
            if not ok_fn():
                rep.failures.append(name)
        except InsufficientPrecision as exc:
            rep.ambiguous.append(f"{name}: {exc}")

    for i in classes:
        for j in classes:
            if j - i > 1:
                for a in classes[i]:
                    for b in classes[j]:
                        tally(f"classes Γ{i}×Γ{j}", lambda a=a, b=b: rays_cross(a, b))

    # touching rays: origin on α_{i+2}, tangent to α_{i+1}
    for i in range(0, f.n_arcs - 1):
        touch = []
        arc = f.arcs[i + 1]
        while len(touch) < max(1, samples // 10):
            x = _arc_point(arc, rng.uniform(0.0, 1.0))
            line = ApproxLine(x, tangent_at(arc, x))
            try:
                ts = [t for t in line_circle_params(line, f.arcs[i + 2].circle)
                      if f.arcs[i + 2].contains_angle_offset(f.arcs[i + 2].offset_of(line.at(t)))]
            except InsufficientPrecision:
                continue
            if not ts:
                rep.failures.append(f"tangent line of α{i + 1} misses α{i + 2}")
                break
            touch.extend(ApproxRay.through(line.at(t), x) for t in ts)
        for tr in touch:
            for g in classes[i]:
                tally(f"touching α{i + 1}", lambda tr=tr, g=g: rays_cross(tr, g))

    for i in range(1, f.n_arcs):
        arc = f.arcs[i]
        for _ in range(samples):
            u1 = rng.uniform(0.0, 1.0)
            y1 = _arc_point(arc, u1)
            if rng.random() < 0.3:
                d = tangent_at(arc, y1)
            else:
                d = _arc_point(arc, rng.uniform(0.0, 1.0)) - y1
            tally(f"secant α{i}→α{i + 1}", lambda y1=y1, d=d: line_meets_arc(ApproxLine(y1, d), f.arcs[i + 1]))
    return rep
