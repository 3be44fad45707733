"""Small embedded plane graph families used as test inputs."""

from __future__ import annotations

import math
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .planar import trace_faces

FAMILIES = ("path", "cycle", "star", "wheel", "grid", "nested-triangles", "random-tree")


class UnknownFamily(ValueError):
    pass


Rotation = Dict[str, List[str]]


def _rotation_from_coords(edges: Sequence[Tuple[int, int]], coords: Dict[int, Tuple[float, float]]) -> Rotation:
    nbrs: Dict[int, List[int]] = {v: [] for v in coords}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rot = {}
    for v, ns in nbrs.items():
        x, y = coords[v]
        # clockwise = decreasing angle
        ns = sorted(ns, key=lambda u: -math.atan2(coords[u][1] - y, coords[u][0] - x))
        rot[str(v)] = [str(u) for u in ns]
    return rot


def _outer_edge(rot: Rotation, coords: Dict[int, Tuple[float, float]], root: int) -> Tuple[str, str]:
    """A directed edge leaving ``root`` whose left face is the unbounded one."""
    best = None
    for f in trace_faces(rot):
        area = 0.0
        for a, b in f.edges:
            (x1, y1), (x2, y2) = coords[int(a)], coords[int(b)]
            area += x1 * y2 - x2 * y1
        if best is None or area < best[0]:
            best = (area, f)
    assert best is not None
    for a, b in best[1].edges:
        if a == str(root):
            return (a, b)
    raise ValueError(f"root {root} is not on the outer face")


def _doc(rot: Rotation, outer: Optional[Tuple[str, str]], family: str, size: int, **meta) -> dict:
    return {
        "format": "rayreduce.graph",
        "version": 1,
        "vertices": list(rot),
        "rotation": rot,
        "outer": list(outer) if outer else None,
        "metadata": {"family": family, "size": size, **meta},
    }


def _polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> List[Tuple[float, float]]:
    return [(radius * math.cos(phase + 2 * math.pi * i / n), radius * math.sin(phase + 2 * math.pi * i / n)) for i in range(n)]


def generate(family: str, size: int, seed: int = 0) -> dict:
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family == "path":
        if size < 1:
            raise ValueError("path needs at least one vertex")
        coords = {i: (float(i), 0.0) for i in range(size)}
        edges = [(i, i + 1) for i in range(size - 1)]
    elif family == "cycle":
        if size < 3:
            raise ValueError("cycle needs at least three vertices")
        coords = dict(enumerate(_polygon(size)))
        edges = [(i, (i + 1) % size) for i in range(size)]
    elif family == "star":
        coords = {0: (0.0, 0.0)}
        coords.update({i + 1: p for i, p in enumerate(_polygon(size))})
        edges = [(0, i) for i in range(1, size + 1)]
        rot = _rotation_from_coords(edges, coords)
        return _doc(rot, ("1", "0"), family, size)
    elif family == "wheel":
        if size < 3:
            raise ValueError("wheel needs at least three rim vertices")
        coords = {i: p for i, p in enumerate(_polygon(size))}
        coords[size] = (0.0, 0.0)
        edges = [(i, (i + 1) % size) for i in range(size)] + [(i, size) for i in range(size)]
    elif family == "grid":
        if size < 2:
            raise ValueError("grid needs side >= 2")
        coords = {r * size + c: (float(c), float(r)) for r in range(size) for c in range(size)}
        edges = [(r * size + c, r * size + c + 1) for r in range(size) for c in range(size - 1)]
        edges += [(r * size + c, (r + 1) * size + c) for r in range(size - 1) for c in range(size)]
    elif family == "nested-triangles":
        if size < 1:
            raise ValueError("need at least one triangle")
        coords = {}
        edges = []
        for layer in range(size):
            for i, p in enumerate(_polygon(3, radius=float(size - layer), phase=math.pi / 2)):
                coords[3 * layer + i] = p
            edges += [(3 * layer + i, 3 * layer + (i + 1) % 3) for i in range(3)]
            if layer:
                edges += [(3 * (layer - 1) + i, 3 * layer + i) for i in range(3)]
    else:  # random-tree
        if size < 1:
            raise ValueError("tree needs at least one vertex")
        rng = random.Random(seed)
        rot: Rotation = {str(i): [] for i in range(size)}
        for i in range(1, size):
            p = rng.randrange(i)
            for a, b in ((i, p), (p, i)):
                ns = rot[str(a)]
                ns.insert(rng.randrange(len(ns) + 1), str(b))
        outer = ("0", rot["0"][0]) if size > 1 else None
        return _doc(rot, outer, family, size, seed=seed)
    rot = _rotation_from_coords(edges, coords)
    if not edges:
        return _doc(rot, None, family, size)
    return _doc(rot, _outer_edge(rot, coords, 0), family, size)
