"""Embedded planar graphs given by rotation systems.

A rotation system lists, for every vertex, its neighbours in clockwise order.
Faces are traced with the usual successor rule: the face to the left of the
directed edge ``u -> v`` continues with ``v -> w`` where ``w`` follows ``u`` in
the clockwise rotation at ``v``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

Vertex = Hashable
DEdge = Tuple[Vertex, Vertex]


class EmbeddingError(ValueError):
    pass


class NotConnected(EmbeddingError):
    pass


class NotSimple(EmbeddingError):
    pass


class NotPlanarEmbedding(EmbeddingError):
    pass


class BadOuterEdge(EmbeddingError):
    pass


class EdgeNotIncident(ValueError):
    pass


def _succ(seq: Sequence[Vertex], x: Vertex) -> Vertex:
    i = seq.index(x)
    return seq[(i + 1) % len(seq)]


@dataclass(frozen=True)
class Face:
    edges: Tuple[DEdge, ...]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(u for u, _ in self.edges)


@dataclass
class EmbeddedGraph:
    vertices: Tuple[Vertex, ...]
    rotation: Dict[Vertex, Tuple[Vertex, ...]]
    outer: Optional[DEdge]
    faces: List[Face] = field(default_factory=list)
    face_of: Dict[DEdge, int] = field(default_factory=dict)
    outer_face: int = 0

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def neighbors(self, v: Vertex) -> Tuple[Vertex, ...]:
        return self.rotation[v]

    def succ_cw(self, v: Vertex, u: Vertex) -> Vertex:
        return _succ(self.rotation[v], u)

    def edge_key(self, u: Vertex, v: Vertex) -> Tuple[Vertex, Vertex]:
        return (u, v) if self._index[u] < self._index[v] else (v, u)

    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        out = []
        for u in self.vertices:
            for v in self.rotation[u]:
                if self._index[u] < self._index[v]:
                    out.append((u, v))
        return out

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return v in self.rotation.get(u, ())

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.rotation.values()) // 2


def trace_faces(rotation: Mapping[Vertex, Sequence[Vertex]]) -> List[Face]:
    seen = set()
    faces = []
    for u in rotation:
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            walk = []
            e = (u, v)
            while e not in seen:
                seen.add(e)
                walk.append(e)
                a, b = e
                e = (b, _succ(rotation[b], a))
            faces.append(Face(tuple(walk)))
    return faces


def validate_embedding(rotation: Mapping[Vertex, Sequence[Vertex]], outer: Optional[DEdge]) -> EmbeddedGraph:
    rot = {v: tuple(ns) for v, ns in rotation.items()}
    if not rot:
        raise NotConnected("empty graph")
    for v, ns in rot.items():
        if v in ns:
            raise NotSimple(f"loop at {v!r}")
        if len(set(ns)) != len(ns):
            raise NotSimple(f"repeated neighbour in rotation of {v!r}")
        for u in ns:
            if u not in rot:
                raise NotSimple(f"{v!r} lists unknown vertex {u!r}")
            if v not in rot[u]:
                raise NotSimple(f"edge {v!r}-{u!r} not listed at {u!r}")
    start = next(iter(rot))
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for u in rot[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    if len(seen) != len(rot):
        raise NotConnected(f"{len(rot) - len(seen)} vertices unreachable from {start!r}")

    g = EmbeddedGraph(tuple(rot), rot, None)
    if g.n_edges == 0:
        # a single vertex; the plane is its only face
        g.faces = [Face(())]
        return g
    faces = trace_faces(rot)
    chi = len(rot) - g.n_edges + len(faces)
    if chi != 2:
        raise NotPlanarEmbedding(f"V - E + F = {chi}, expected 2")
    if outer is None or len(outer) != 2 or not g.has_edge(*outer):
        raise BadOuterEdge(f"outer edge {outer!r} is not an edge of the graph")
    g.outer = (outer[0], outer[1])
    g.faces = faces
    g.face_of = {e: i for i, f in enumerate(faces) for e in f.edges}
    g.outer_face = g.face_of[g.outer]
    return g


@dataclass
class DualGraph:
    """Dual multigraph: one node per face, one edge per primal edge."""

    n_faces: int
    edges: Dict[Tuple[Vertex, Vertex], Tuple[int, int]]

    def primal_of(self, f1: int, f2: int) -> List[Tuple[Vertex, Vertex]]:
        return [e for e, ends in self.edges.items() if set(ends) == {f1, f2} or ends == (f1, f2)]


def dual_graph(g: EmbeddedGraph) -> DualGraph:
    edges = {}
    for u, v in g.edges():
        edges[(u, v)] = (g.face_of[(u, v)], g.face_of[(v, u)])
    return DualGraph(len(g.faces), edges)


@dataclass
class BFSTree:
    root: Vertex
    level: Dict[Vertex, int]
    parent: Dict[Vertex, Optional[Vertex]]
    edges: List[Tuple[Vertex, Vertex]]  # keyed as g.edge_key


def bfs_tree(g: EmbeddedGraph, r: Vertex, first: Optional[Vertex] = None) -> BFSTree:
    """BFS from ``r``; each vertex scans its rotation starting from its parent edge.

    The root starts at ``first`` (default: head of the outer edge when it leaves
    ``r``, else the first listed neighbour).
    """
    if r not in g.rotation:
        raise KeyError(r)
    if first is None and g.outer is not None and g.outer[0] == r:
        first = g.outer[1]
    level = {r: 0}
    parent: Dict[Vertex, Optional[Vertex]] = {r: None}
    edges = []
    q = deque([r])
    while q:
        v = q.popleft()
        rot = list(g.rotation[v])
        if not rot:
            continue
        anchor = parent[v] if parent[v] is not None else (first if first in rot else rot[0])
        i = rot.index(anchor)
        for u in rot[i:] + rot[:i]:
            if u not in level:
                level[u] = level[v] + 1
                parent[u] = v
                edges.append(g.edge_key(v, u))
                q.append(u)
    return BFSTree(r, level, parent, edges)


@dataclass
class OrderedTree:
    """A rooted tree with the breadth-first linear order induced by its rotation."""

    rotation: Dict[Vertex, Tuple[Vertex, ...]]
    root: Vertex
    first: Optional[Vertex]
    order: List[Vertex]
    level: Dict[Vertex, int]
    parent: Dict[Vertex, Optional[Vertex]]
    children: Dict[Vertex, List[Vertex]]

    def __post_init__(self):
        self.pos = {v: i for i, v in enumerate(self.order)}

    def __len__(self) -> int:
        return len(self.order)

    def __contains__(self, v: Vertex) -> bool:
        return v in self.pos

    @property
    def depth(self) -> int:
        return max(self.level.values())

    def succ(self, v: Vertex) -> Optional[Vertex]:
        i = self.pos[v] + 1
        return self.order[i] if i < len(self.order) else None

    def pred(self, v: Vertex) -> Optional[Vertex]:
        i = self.pos[v] - 1
        return self.order[i] if i >= 0 else None

    def is_leaf(self, v: Vertex) -> bool:
        return len(self.rotation[v]) == 1

    def at_level(self, i: int) -> List[Vertex]:
        return [v for v in self.order if self.level[v] == i]

    def consecutive(self, u: Vertex, v: Vertex) -> bool:
        return abs(self.pos[u] - self.pos[v]) == 1

    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        return [(self.parent[v], v) for v in self.order if self.parent[v] is not None]


def natural_order(rotation: Mapping[Vertex, Sequence[Vertex]], r: Vertex, s: Optional[Vertex]) -> OrderedTree:
    rot = {v: tuple(ns) for v, ns in rotation.items()}
    if r not in rot:
        raise KeyError(r)
    if s is None:
        if rot[r]:
            raise EdgeNotIncident("a first edge is required when the root has neighbours")
    elif s not in rot[r]:
        raise EdgeNotIncident(f"{r!r}-{s!r} is not an edge")
    n_edges = sum(len(ns) for ns in rot.values()) // 2
    if n_edges != len(rot) - 1:
        raise ValueError("not a tree: |E| != |V| - 1")
    order = [r]
    level = {r: 0}
    parent: Dict[Vertex, Optional[Vertex]] = {r: None}
    children: Dict[Vertex, List[Vertex]] = {}
    q = deque([r])
    while q:
        v = q.popleft()
        ns = list(rot[v])
        if parent[v] is None:
            kids = ns[ns.index(s):] + ns[: ns.index(s)] if ns else []
        else:
            i = ns.index(parent[v])
            kids = ns[i + 1:] + ns[:i]
        children[v] = kids
        for u in kids:
            if u in level:
                raise ValueError("not a tree: cycle detected")
            level[u] = level[v] + 1
            parent[u] = v
            order.append(u)
            q.append(u)
    if len(order) != len(rot):
        raise ValueError("not a tree: disconnected")
    return OrderedTree(rot, r, s, order, level, parent, children)


@dataclass
class Violation:
    path: int
    kind: str
    message: str


@dataclass
class AdmissibilityReport:
    violations: List[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_admissible(t: OrderedTree, paths: Sequence[Sequence[Vertex]]) -> AdmissibilityReport:
    out: List[Violation] = []
    owner: Dict[Vertex, int] = {}
    for i, p in enumerate(paths):
        if len(p) not in (3, 4):
            out.append(Violation(i, "size", f"path has {len(p)} vertices"))
        if len(p) < 2:
            continue
        a, b = p[0], p[-1]
        for end in (a, b):
            if end not in t:
                out.append(Violation(i, "leaf", f"endpoint {end!r} not in the tree"))
            elif not t.is_leaf(end):
                out.append(Violation(i, "leaf", f"endpoint {end!r} is not a leaf"))
        if a in t and b in t:
            if t.level[a] != t.level[b]:
                out.append(Violation(i, "level", f"endpoints at levels {t.level[a]} and {t.level[b]}"))
            if not t.consecutive(a, b):
                out.append(Violation(i, "consecutive", f"{a!r} and {b!r} not consecutive in the order"))
        for x in p[1:-1]:
            if x in t:
                out.append(Violation(i, "internal", f"internal vertex {x!r} belongs to the tree"))
            if x in owner:
                out.append(Violation(i, "disjoint", f"internal vertex {x!r} shared with path {owner[x]}"))
            owner[x] = i
    ends = {p[0] for p in paths if p} | {p[-1] for p in paths if p}
    for x, i in owner.items():
        if x in ends:
            out.append(Violation(i, "disjoint", f"internal vertex {x!r} is an endpoint of another path"))
    return AdmissibilityReport(out)
