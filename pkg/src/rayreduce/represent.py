"""Symbolic ray scene for the complement of ``T + P``.

Every constructed point is a node of a recipe DAG (arc endpoints, arc centres,
line/arc meets, regular spacings, near points). Rays refer to nodes only, so
the whole scene can be re-evaluated from scratch after each point is snapped
to a lattice; incidences built into the recipes then hold exactly.

Layout: a level-``i`` vertex of ``T`` has its origin on ``α_{i+1}`` and its ray
passes through the parent's origin; same-level origins follow the linear
order of ``T`` along the arc. Paths of ``P`` are attached afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .decompose import Decomposition
from .frame import (
    ApproxRay,
    Frame,
    FrameTooShallow,
    RayClassQuery,
    build_frame,
    frame_size_for_depth,
    gamma_membership,
    on_arc,
    rays_cross,
)
from .planar import OrderedTree, Vertex
from .realfield import (
    Approx,
    ApproxLine,
    ApproxPoint,
    ArcApprox,
    InsufficientPrecision,
    line_circle_params,
    require_sign,
)


class ConstructionError(RuntimeError):
    """A geometric assumption of the construction did not hold."""


# recipes ----------------------------------------------------------------


@dataclass(frozen=True)
class FramePoint:
    index: int  # p_index


@dataclass(frozen=True)
class ArcEndpoint:
    arc: int
    end: int  # 0: counterclockwise start, 1: end


@dataclass(frozen=True)
class ArcCenter:
    arc: int


@dataclass(frozen=True)
class LineArcMeet:
    a: int
    b: int
    arc: int
    root: int  # which full-circle intersection, in increasing parameter along a -> b


@dataclass(frozen=True)
class ArcSpacing:
    arc: int
    lo: int
    hi: int
    j: int
    d: int


@dataclass(frozen=True)
class NearPoint:
    arc: int
    a: int
    b: int
    fraction: Fraction


Recipe = Union[FramePoint, ArcEndpoint, ArcCenter, LineArcMeet, ArcSpacing, NearPoint]


@dataclass(frozen=True)
class ThroughTwo:
    origin: int
    through: int


@dataclass(frozen=True)
class ParallelAt:
    origin: int
    reference: Vertex


@dataclass(frozen=True)
class LineThroughTwo:
    a: int
    b: int


RayRecipe = Union[ThroughTwo, ParallelAt, LineThroughTwo]


def recipe_parents(r: Recipe) -> Tuple[int, ...]:
    if isinstance(r, LineArcMeet):
        return (r.a, r.b)
    if isinstance(r, ArcSpacing):
        return (r.lo, r.hi)
    if isinstance(r, NearPoint):
        return (r.a, r.b)
    return ()


# evaluation ---------------------------------------------------------------


def _fraction_on_arc(arc: ArcApprox, a: ApproxPoint, b: ApproxPoint, frac: Fraction) -> ApproxPoint:
    o0, o1 = arc.offset_of(a), arc.offset_of(b)
    return arc.point_at_offset(o0 + (o1 - o0) * frac)


def _meet_candidates(frame: Frame, a: ApproxPoint, b: ApproxPoint, arc: int) -> List[Tuple[ApproxPoint, bool]]:
    line = ApproxLine.through(a, b)
    out = []
    ar = frame.arcs[arc]
    for t in line_circle_params(line, ar.circle):
        p = line.at(t)
        out.append((p, ar.contains_angle_offset(ar.offset_of(p))))
    return out


def evaluate_recipe(r: Recipe, frame: Frame, vals: Sequence[ApproxPoint]) -> ApproxPoint:
    if isinstance(r, FramePoint):
        return frame.points[r.index]
    if isinstance(r, ArcEndpoint):
        return frame.arcs[r.arc].endpoints[r.end]
    if isinstance(r, ArcCenter):
        return frame.arcs[r.arc].midpoint()
    if isinstance(r, LineArcMeet):
        cands = _meet_candidates(frame, vals[r.a], vals[r.b], r.arc)
        if len(cands) != 2:
            raise InsufficientPrecision("line/arc meet lost a root")
        return cands[r.root][0]
    if isinstance(r, ArcSpacing):
        return _fraction_on_arc(frame.arcs[r.arc], vals[r.lo], vals[r.hi], Fraction(r.j, r.d + 1))
    if isinstance(r, NearPoint):
        return _fraction_on_arc(frame.arcs[r.arc], vals[r.a], vals[r.b], r.fraction)
    raise TypeError(f"unknown recipe {r!r}")


def ray_direction(rec: RayRecipe, vals: Sequence[ApproxPoint], rays: Dict[Vertex, RayRecipe]) -> ApproxPoint:
    if isinstance(rec, ThroughTwo):
        return vals[rec.through] - vals[rec.origin]
    if isinstance(rec, ParallelAt):
        return ray_direction(rays[rec.reference], vals, rays)
    return vals[rec.b] - vals[rec.a]


def ray_origin(rec: RayRecipe) -> int:
    return rec.a if isinstance(rec, LineThroughTwo) else rec.origin


# scene ------------------------------------------------------------------------


@dataclass
class PathAttachment:
    path: Tuple[Vertex, ...]
    case: int
    scenario: Optional[str] = None
    shift_u: Optional[bool] = None  # shifted γ_u hits u's parent ray
    shift_v: Optional[bool] = None


@dataclass
class Scene:
    frame: Frame
    nodes: List[Recipe] = field(default_factory=list)
    values: List[ApproxPoint] = field(default_factory=list)
    rays: Dict[Vertex, RayRecipe] = field(default_factory=dict)
    origin_of: Dict[Vertex, int] = field(default_factory=dict)
    level_order: Dict[int, List[Vertex]] = field(default_factory=dict)
    arc_sense: Dict[int, int] = field(default_factory=dict)  # +1: order runs from the arc's start
    parent: Dict[Vertex, Optional[Vertex]] = field(default_factory=dict)
    level: Dict[Vertex, int] = field(default_factory=dict)
    attachments: List[PathAttachment] = field(default_factory=list)
    n: int = 0
    _index: Dict[Recipe, int] = field(default_factory=dict, repr=False)

    def add(self, r: Recipe) -> int:
        if r in self._index:
            return self._index[r]
        for p in recipe_parents(r):
            if not 0 <= p < len(self.nodes):
                raise ValueError(f"recipe refers to unknown node {p}")
        self.values.append(evaluate_recipe(r, self.frame, self.values))
        self.nodes.append(r)
        self._index[r] = len(self.nodes) - 1
        return len(self.nodes) - 1

    def approx_ray(self, v: Vertex) -> ApproxRay:
        rec = self.rays[v]
        return ApproxRay(self.values[ray_origin(rec)], ray_direction(rec, self.values, self.rays))

    @property
    def vertices(self) -> List[Vertex]:
        return list(self.rays)


def _line_arc_node(s: Scene, a: int, b: int, arc: int) -> int:
    cands = _meet_candidates(s.frame, s.values[a], s.values[b], arc)
    on = [i for i, (_, ok) in enumerate(cands) if ok]
    if len(cands) != 2 or len(on) != 1:
        raise ConstructionError(f"line through nodes {a},{b} meets α{arc} in {len(on)} points")
    return s.add(LineArcMeet(a, b, arc, on[0]))


def snooker_build(t: OrderedTree, f: Frame, n: Optional[int] = None) -> Scene:
    depth = t.depth
    if depth + 1 > f.n_arcs:
        raise FrameTooShallow(f"tree depth {depth} needs arc α{depth + 1}; frame k={f.k} has {f.n_arcs} arcs")
    s = Scene(f, n=n if n is not None else len(t))
    s.parent = dict(t.parent)
    s.level = dict(t.level)
    r = t.root
    s.origin_of[r] = s.add(ArcCenter(1))
    s.rays[r] = ThroughTwo(s.origin_of[r], s.add(FramePoint(0)))
    s.level_order[0] = [r]
    s.arc_sense[1] = 1
    ends = (s.add(ArcEndpoint(1, 0)), s.add(ArcEndpoint(1, 1)))
    for i in range(depth):
        row = t.at_level(i)
        nxt = i + 2
        pairs: Dict[frozenset, int] = {}

        def bound(x: int, y: int) -> int:
            key = frozenset((x, y))
            if key not in pairs:
                pairs[key] = _line_arc_node(s, x, y, nxt)
            return pairs[key]

        arc = f.arcs[nxt]
        first_bounds = None
        for j, v in enumerate(row):
            kids = t.children[v]
            if not kids:
                continue
            a_v = s.origin_of[v]
            a_minus = s.origin_of[row[j - 1]] if j > 0 else ends[0]
            a_plus = s.origin_of[row[j + 1]] if j + 1 < len(row) else ends[1]
            lo, hi = bound(a_v, a_minus), bound(a_v, a_plus)
            if first_bounds is None:
                first_bounds = (lo, hi)
            for jj, c in enumerate(kids, start=1):
                s.origin_of[c] = s.add(ArcSpacing(nxt, lo, hi, jj, len(kids)))
                s.rays[c] = ThroughTwo(s.origin_of[c], a_v)
        assert first_bounds is not None
        lo_off = arc.offset_of(s.values[first_bounds[0]])
        hi_off = arc.offset_of(s.values[first_bounds[1]])
        sense = require_sign(hi_off - lo_off, "arc orientation")
        if sense == 0:
            raise ConstructionError(f"bounds on α{nxt} coincide")
        s.arc_sense[nxt] = sense
        ends = (s.add(ArcEndpoint(nxt, 0 if sense > 0 else 1)), s.add(ArcEndpoint(nxt, 1 if sense > 0 else 0)))
        nrow = t.at_level(i + 1)
        s.level_order[i + 1] = nrow
        offs = [arc.offset_of(s.values[s.origin_of[c]]) * sense for c in nrow]
        for a, b in zip(offs, offs[1:]):
            if require_sign(b - a, "origin order along arc") <= 0:
                raise ConstructionError(f"origins on α{nxt} out of order")
    return s


def check_snooker(s: Scene, t: OrderedTree) -> List[str]:
    """Violations of the snooker properties on the approximate scene (empty when all hold).

    (a) a level-i ray is in Γ_i; (b) a child's ray runs from its own origin
    through the parent's origin; (c) each level's origins lie on their arc in
    the tree's linear order and no other level's origin is on that arc.
    """
    out: List[str] = []
    tol = Fraction(1, 1 << (s.frame.bits // 2))
    for v in t.order:
        i = t.level[v]
        try:
            if not gamma_membership(RayClassQuery(s.frame, i), s.approx_ray(v)):
                out.append(f"(a) ray of {v!r} is not in Γ{i}")
        except InsufficientPrecision as exc:
            out.append(f"(a) ray of {v!r}: {exc}")
        p = t.parent[v]
        rec = s.rays[v]
        if p is not None and rec != ThroughTwo(s.origin_of[v], s.origin_of[p]):
            out.append(f"(b) ray of {v!r} does not pass through the origin of {p!r}")
    for i in range(t.depth + 1):
        arc = s.frame.arcs[i + 1]
        row = t.at_level(i)
        if [x for x in s.level_order.get(i, [])] != row:
            out.append(f"(c) level {i} order differs from the tree order")
        sense = s.arc_sense.get(i + 1, 1)
        try:
            offs = [arc.offset_of(s.values[s.origin_of[v]]) * sense for v in row]
            for a, b in zip(offs, offs[1:]):
                if require_sign(b - a, "origin order") <= 0:
                    out.append(f"(c) origins out of order on α{i + 1}")
            for v in t.order:
                on = on_arc(arc, s.values[s.origin_of[v]], tol)
                if on != (t.level[v] == i):
                    out.append(f"(c) origin of {v!r} {'on' if on else 'off'} α{i + 1}")
        except InsufficientPrecision as exc:
            out.append(f"(c) level {i}: {exc}")
    return out


def _near_point(s: Scene, u: Vertex, v: Vertex) -> int:
    arc = s.level[u] + 1
    return s.add(NearPoint(arc, s.origin_of[u], s.origin_of[v], Fraction(1, s.n)))


def _shift_hits_parent(s: Scene, u: Vertex, v: Vertex) -> bool:
    arc = s.level[u] + 1
    b = evaluate_recipe(NearPoint(arc, s.origin_of[u], s.origin_of[v], Fraction(1, s.n)), s.frame, s.values)
    shifted = ApproxRay(b, s.approx_ray(u).dir)
    return rays_cross(shifted, s.approx_ray(s.parent[u]))


def shift_tests(s: Scene, u: Vertex, v: Vertex) -> Tuple[bool, bool]:
    """Outcomes of shifting ``a_u`` towards ``a_v`` and ``a_v`` towards ``a_u``."""
    return _shift_hits_parent(s, u, v), _shift_hits_parent(s, v, u)


def scenario_predicate(s: Scene, u: Vertex, v: Vertex) -> str:
    iu, iv = shift_tests(s, u, v)
    if iu == iv:
        raise ConstructionError(f"shift tests for {u!r},{v!r} agree ({iu}); expected exactly one")
    return "I" if iu else "II"


def _check_leaves(s: Scene, u: Vertex, v: Vertex) -> None:
    for x in (u, v):
        if x not in s.origin_of:
            raise ValueError(f"{x!r} is not represented")
    if s.level[u] != s.level[v]:
        raise ValueError(f"{u!r} and {v!r} are on different levels")


def attach_path_case1(s: Scene, u: Vertex, w: Vertex, v: Vertex) -> Scene:
    _check_leaves(s, u, v)
    s.rays[w] = LineThroughTwo(s.origin_of[u], s.origin_of[v])
    s.attachments.append(PathAttachment((u, w, v), 1))
    return s


def attach_path_case2(s: Scene, u: Vertex, w: Vertex, w2: Vertex, v: Vertex, scenario: Optional[str] = None) -> Scene:
    _check_leaves(s, u, v)
    iu, iv = shift_tests(s, u, v)
    if scenario is None:
        if iu == iv:
            raise ConstructionError(f"shift tests for {u!r},{v!r} agree ({iu}); expected exactly one")
        scenario = "I" if iu else "II"
    if scenario == "I":
        b = _near_point(s, u, v)
        s.rays[w] = ParallelAt(b, u)
        s.rays[w2] = LineThroughTwo(b, s.origin_of[v])
    elif scenario == "II":
        b = _near_point(s, v, u)
        s.rays[w2] = ParallelAt(b, v)
        s.rays[w] = LineThroughTwo(b, s.origin_of[u])
    else:
        raise ValueError(f"scenario must be 'I' or 'II', got {scenario!r}")
    s.attachments.append(PathAttachment((u, w, w2, v), 2, scenario, iu, iv))
    return s


def represent_graph(d: Decomposition, bits: int) -> Scene:
    t = d.tree
    k = frame_size_for_depth(t.depth)
    f = build_frame(k, bits)
    n = len(d.h.vertices)
    s = snooker_build(t, f, n=n)
    for p in d.path_list():
        u, v = p[0], p[-1]
        if t.pos[u] > t.pos[v]:
            p = p[::-1]
            u, v = v, u
        if len(p) == 3:
            attach_path_case1(s, u, p[1], v)
        else:
            attach_path_case2(s, u, p[1], p[2], v)
    if len(s.rays) != n:
        raise ConstructionError(f"{len(s.rays)} rays for {n} vertices")
    return s
