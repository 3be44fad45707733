"""Shared fixtures-free helpers for the test suite."""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

from rayreduce.certify import certified_reduce
from rayreduce.documents import GraphDocument
from rayreduce.exact_geom import OpenRay
from rayreduce.generators import generate

# name -> (family, size); wheel size counts rim vertices, so wheel 3 is K4
CORPUS = {
    "P2": ("path", 2),
    "P4": ("path", 4),
    "C3": ("cycle", 3),
    "C4": ("cycle", 4),
    "C5": ("cycle", 5),
    "C6": ("cycle", 6),
    "K4": ("wheel", 3),
    "W5": ("wheel", 5),
    "grid3": ("grid", 3),
    "nested6": ("nested-triangles", 2),
}


def graph(family, size, seed=0):
    return GraphDocument.from_dict(generate(family, size, seed)).to_graph()


def corpus_graph(name):
    return graph(*CORPUS[name])


@functools.lru_cache(maxsize=None)
def corpus_reduction(name):
    return certified_reduce(corpus_graph(name))


def adjacency(g):
    return {v: set(g.rotation[v]) for v in g.vertices}


def rational_ray_oracle(r1: OpenRay, r2: OpenRay) -> bool:
    """Parametric solve of o1 + s*d1 = o2 + t*d2 over the rationals, s, t > 0."""
    (ax, ay), (bx, by) = (r1.dir.dx, r1.dir.dy), (r2.dir.dx, r2.dir.dy)
    cx, cy = r2.origin.x - r1.origin.x, r2.origin.y - r1.origin.y
    det = -ax * by + ay * bx  # matrix [[ax, -bx], [ay, -by]]
    if det != 0:
        s = Fraction(-cx * by + cy * bx, det)
        t = Fraction(ax * cy - ay * cx, det)
        return s > 0 and t > 0
    if ax * cy - ay * cx != 0:
        return False
    # same supporting line: compare the two open half-lines in r1's parameter
    dd = ax * ax + ay * ay
    s0 = Fraction(cx * ax + cy * ay, dd)
    step = Fraction(bx * ax + by * ay, dd)
    if step > 0:
        return True
    return s0 > 0


def is_even_subdivision(g, h, plan) -> bool:
    """Contracting every planned path of ``h`` gives back ``g``."""
    gedges = {frozenset(e) for e in g.edges()}
    hedges = {frozenset(e) for e in h.graph.edges()}
    seen = set()
    for e, q in h.paths.items():
        if len(q) - 2 != plan[e] or plan[e] % 2:
            return False
        if {q[0], q[-1]} != set(e):
            return False
        seen |= {frozenset(p) for p in zip(q, q[1:])}
    rest = hedges - seen
    return rest | {frozenset(e) for e in h.paths} == gedges and not (rest & {frozenset(e) for e in h.paths})


def decomposition_violations(d) -> list:
    """Every structural property a decomposition must satisfy, as a list of failures."""
    out = []
    h, t, lv = d.h, d.tree, d.subdivided.level
    trot = t.rotation
    if sum(len(ns) for ns in trot.values()) // 2 != len(trot) - 1:
        out.append("T is not a tree")
    tedges = {frozenset((u, v)) for u in trot for v in trot[u]}
    pedges = {frozenset(p) for q in d.paths.values() for p in zip(q, q[1:])}
    if tedges & pedges or tedges | pedges != {frozenset(e) for e in h.edges()}:
        out.append("T + P differs from H")
    if not is_even_subdivision(d.graph, d.subdivided, d.plan):
        out.append("H is not an even subdivision of G")
    for e, p in d.paths.items():
        if len(p) not in (3, 4):
            out.append(f"{e}: {len(p)} vertices")
        a, b = p[0], p[-1]
        if not (t.is_leaf(a) and t.is_leaf(b)):
            out.append(f"{e}: endpoint not a leaf")
        if not t.consecutive(a, b):
            out.append(f"{e}: endpoints not consecutive")
        if lv[a] != lv[b]:
            out.append(f"{e}: endpoints not equidistant")
        if any(x in trot for x in p[1:-1]):
            out.append(f"{e}: internal vertex in T")
    ct = d.cotree
    for f, e in ct.parent_edge.items():
        k = d.plan[e]
        if ct.is_leaf(f) and k != 4:
            out.append(f"{e}: leaf count {k}")
        for c in ct.children[f]:
            if k < d.plan[ct.parent_edge[c]] + 2:
                out.append(f"{e}: not above child by 2")
    return out


def lemma_instances(count=100, seed=2024, max_n=10, p=0.4, max_count=6):
    """Random graphs with random even subdivision counts, as (adjacency, counts) pairs."""
    import random

    from rayreduce.oracles import graph_from_edges

    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_n)
        edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
        counts = {e: rng.choice(range(0, max_count + 1, 2)) for e in edges}
        out.append((graph_from_edges(range(n), edges), counts))
    return out


def brute_alpha(adj) -> int:
    vs = list(adj)
    for r in range(len(vs), 0, -1):
        for s in itertools.combinations(vs, r):
            if all(b not in adj[a] for a, b in itertools.combinations(s, 2)):
                return r
    return 0
