"""Snap a scene to an integer lattice and check it exactly.

Snapping re-runs the recipe DAG in order, feeding every node the already
snapped values of its parents, so through-points and parallel copies are exact
at any scale. Verification then compares the exact intersection graph of the
integer rays with the complement of ``H``; nothing approximate is trusted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Set, Tuple, Union

from .decompose import Decomposition, SubdividedGraph, decompose
from .exact_geom import (
    BBox,
    IntPoint,
    Line,
    OpenRay,
    bit_length,
    line_line_meet,
    line_to_ray,
    ray_ray_intersect,
    supporting_line,
)
from .planar import EmbeddedGraph, Vertex
from .realfield import Approx, ApproxPoint, InsufficientPrecision
from .represent import (
    LineThroughTwo,
    ParallelAt,
    Scene,
    ThroughTwo,
    evaluate_recipe,
    represent_graph,
)

GUARD_BITS = 64


class PrecisionCapExceeded(RuntimeError):
    def __init__(self, message: str, certificate: Optional["Certificate"] = None):
        super().__init__(message)
        self.certificate = certificate


@dataclass
class SnappedScene:
    scale_bits: int
    points: List[IntPoint]
    rays: Dict[Vertex, OpenRay]
    k: int = 0

    @property
    def vertices(self) -> List[Vertex]:
        return list(self.rays)

    def max_bits(self) -> int:
        return max((max(bit_length(r.origin), abs(r.dir.dx).bit_length(), abs(r.dir.dy).bit_length())
                    for r in self.rays.values()), default=0)


@dataclass
class Certificate:
    passed: bool
    scale_bits: int
    retries: int
    mismatches: List[Tuple[Vertex, Vertex, bool, bool]]  # (u, v, expected, observed)
    max_coordinate_bits: int
    seconds: float
    n: int = 0
    bit_cap: Optional[int] = None


def _snap(p: ApproxPoint, B: int) -> IntPoint:
    shift = p.bits - B
    if shift < 1:
        raise InsufficientPrecision(f"working precision {p.bits} does not exceed lattice scale {B}")
    half = 1 << (shift - 1)
    if p.x.err >= half or p.y.err >= half:
        raise InsufficientPrecision("node error exceeds half a lattice cell")

    def rnd(a: Approx) -> int:
        q, r = divmod(a.value, 1 << shift)
        if 2 * r > (1 << shift) or (2 * r == (1 << shift) and q & 1):
            q += 1
        return q

    return IntPoint(rnd(p.x), rnd(p.y))


def _lift(q: IntPoint, B: int, bits: int) -> ApproxPoint:
    s = bits - B
    return ApproxPoint(Approx(q.x << s, 0, bits), Approx(q.y << s, 0, bits))


def snap_scene(s: Scene, B: int) -> SnappedScene:
    bits = s.frame.bits
    pts: List[IntPoint] = []
    lifted: List[ApproxPoint] = []
    for rec in s.nodes:
        q = _snap(evaluate_recipe(rec, s.frame, lifted), B)
        pts.append(q)
        lifted.append(_lift(q, B, bits))
    rays: Dict[Vertex, Optional[OpenRay]] = {}
    lines: Dict[Vertex, Line] = {}
    for v, rec in s.rays.items():
        if isinstance(rec, ThroughTwo):
            a, b = pts[rec.origin], pts[rec.through]
            if a == b:
                raise InsufficientPrecision(f"ray of {v!r}: origin and through-point snap together")
            rays[v] = OpenRay.through(a, b)
        elif isinstance(rec, LineThroughTwo):
            a, b = pts[rec.a], pts[rec.b]
            if a == b:
                raise InsufficientPrecision(f"line of {v!r}: points snap together")
            lines[v] = Line.through(a, b)
            rays[v] = None
        else:
            rays[v] = None
    for v, rec in s.rays.items():
        if isinstance(rec, ParallelAt):
            rays[v] = OpenRay(pts[rec.origin], rays[rec.reference].dir)
    if lines:
        support = [supporting_line(r) for r in rays.values() if r is not None] + list(lines.values())
        meets = [p for l1, l2 in combinations(support, 2) if (p := line_line_meet(l1, l2)) is not None]
        box = BBox.around(meets + pts)
        for v, l in lines.items():
            rays[v] = line_to_ray(l, box)
    return SnappedScene(B, pts, rays, s.frame.k)  # type: ignore[arg-type]


def exact_intersection_graph(ss: SnappedScene) -> Dict[Vertex, Set[Vertex]]:
    adj: Dict[Vertex, Set[Vertex]] = {v: set() for v in ss.rays}
    for u, v in combinations(ss.rays, 2):
        if ray_ray_intersect(ss.rays[u], ss.rays[v]):
            adj[u].add(v)
            adj[v].add(u)
    return adj


def verify_against(ss: SnappedScene, h: Union[EmbeddedGraph, SubdividedGraph], retries: int = 0,
                   bit_cap: Optional[int] = None) -> Certificate:
    g = h.graph if isinstance(h, SubdividedGraph) else h
    t0 = time.perf_counter()
    mism: List[Tuple[Vertex, Vertex, bool, bool]] = []
    verts = list(g.vertices)
    missing = [v for v in verts if v not in ss.rays]
    extra = [v for v in ss.rays if v not in set(verts)]
    if missing or extra:
        raise ValueError(f"vertex maps differ: missing {missing[:5]}, extra {extra[:5]}")
    for u, v in combinations(verts, 2):
        expected = not g.has_edge(u, v)
        observed = ray_ray_intersect(ss.rays[u], ss.rays[v])
        if expected != observed:
            mism.append((u, v, expected, observed))
    return Certificate(
        passed=not mism,
        scale_bits=ss.scale_bits,
        retries=retries,
        mismatches=mism,
        max_coordinate_bits=ss.max_bits(),
        seconds=time.perf_counter() - t0,
        n=len(verts),
        bit_cap=bit_cap,
    )


@dataclass
class Reduction:
    decomposition: Decomposition
    scene: Scene
    snapped: SnappedScene
    certificate: Certificate

    @property
    def offset(self) -> int:
        return self.decomposition.offset


def certified_reduce(g: EmbeddedGraph, start_bits: int = 256, cap_constant: int = 50,
                     guard_bits: int = GUARD_BITS) -> Reduction:
    """Decompose, build, snap and verify, doubling the lattice scale until the check passes."""
    d = decompose(g)
    n = len(d.h.vertices)
    # tiny inputs would otherwise cap below the first attempt
    cap = max(cap_constant * n ** 3, start_bits)
    B = start_bits
    retries = 0
    last: Optional[Certificate] = None
    reason = ""
    while B <= cap:
        try:
            scene = represent_graph(d, B + guard_bits)
            ss = snap_scene(scene, B)
            cert = verify_against(ss, d.subdivided, retries, cap)
            if cert.passed:
                return Reduction(d, scene, ss, cert)
            last = cert
            reason = f"{len(cert.mismatches)} mismatched pairs at B={B}"
        except InsufficientPrecision as exc:
            reason = f"B={B}: {exc}"
        B *= 2
        retries += 1
    raise PrecisionCapExceeded(f"no certified scene within {cap} bits (n={n}); last attempt: {reason}", last)
