"""Split an even subdivision of a plane graph into a tree plus short paths.

Pipeline: BFS tree ``B`` from the root, cotree on the dual from the remaining
edges, subdivision counts ``k_e`` assigned bottom-up on the cotree, the
subdivided graph ``H``, and finally the middle 3- or 4-vertex piece ``P_e`` of
every subdivided edge. Removing the ``P_e`` interiors from ``H`` leaves a tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .planar import (
    AdmissibilityReport,
    BFSTree,
    EmbeddedGraph,
    OrderedTree,
    Vertex,
    Violation,
    bfs_tree,
    check_admissible,
    natural_order,
    validate_embedding,
)

Edge = Tuple[Vertex, Vertex]


class NoEquidistantSubpath(ValueError):
    pass


class AdmissibilityFailed(ValueError):
    def __init__(self, report: AdmissibilityReport):
        super().__init__("; ".join(f"path {v.path}: {v.kind}: {v.message}" for v in report.violations))
        self.report = report


@dataclass
class Cotree:
    root: int
    parent: Dict[int, Optional[int]]  # face -> parent face
    parent_edge: Dict[int, Edge]  # face -> primal edge whose dual joins it to its parent
    children: Dict[int, List[int]]
    graph: Optional[EmbeddedGraph] = None
    bfs: Optional[BFSTree] = None

    @property
    def edges(self) -> List[Edge]:
        return list(self.parent_edge.values())

    def is_leaf(self, f: int) -> bool:
        return not self.children[f]


def cotree(g: EmbeddedGraph, bfs: BFSTree) -> Cotree:
    b = set(bfs.edges)
    nonb = [e for e in g.edges() if e not in b]
    adj: Dict[int, List[Tuple[int, Edge]]] = {i: [] for i in range(len(g.faces))}
    for u, v in nonb:
        f1, f2 = g.face_of[(u, v)], g.face_of[(v, u)]
        adj[f1].append((f2, (u, v)))
        adj[f2].append((f1, (u, v)))
    root = g.outer_face
    parent: Dict[int, Optional[int]] = {root: None}
    pedge: Dict[int, Edge] = {}
    children: Dict[int, List[int]] = {i: [] for i in adj}
    q = deque([root])
    while q:
        f = q.popleft()
        for h, e in adj[f]:
            if h in parent:
                continue
            parent[h] = f
            pedge[h] = e
            children[f].append(h)
            q.append(h)
    # interdigitating trees: the duals of the non-tree edges form a spanning tree
    assert len(parent) == len(g.faces), "cotree does not span the dual"
    assert len(nonb) == len(g.faces) - 1, "cotree has a cycle"
    return Cotree(root, parent, pedge, children, g, bfs)


def path_base(level: Dict[Vertex, int], e: Edge) -> int:
    """Level of the ``P_e`` endpoints is ``path_base + k_e / 2``."""
    a, b = level[e[0]], level[e[1]]
    return a - 1 if a == b else min(a, b)


def _fundamental_cycle(bfs: BFSTree, e: Edge) -> set:
    u, v = e
    up = []
    x = u
    while x is not None:
        up.append(x)
        x = bfs.parent[x]
    anc = set(up)
    cyc = set()
    y = v
    while y not in anc:
        cyc.add(y)
        y = bfs.parent[y]
    cyc.update(up[: up.index(y) + 1])
    return cyc


def assign_ke(ct: Cotree) -> Dict[Edge, int]:
    """Bottom-up subdivision counts.

    An edge into a leaf face gets 4; any other edge at least 2 plus the largest
    count below it. When the cotree carries its graph, counts are raised further
    (in steps of 2) until the edge's path lies strictly deeper than every tree
    vertex enclosed by the edge's fundamental cycle; otherwise nested paths can
    land on one level and interleave in the linear order.
    """
    ke: Dict[Edge, int] = {}
    g, bfs = ct.graph, ct.bfs

    def visit(f: int):
        """Returns (largest count below, deepest enclosed tree level, enclosed G-vertices)."""
        below, deepest = 0, -1
        inside = set(g.faces[f].vertices) if g is not None else set()
        for h in ct.children[f]:
            kb, db, ib = visit(h)
            below, deepest = max(below, kb), max(deepest, db)
            inside |= ib
        if f == ct.root:
            return below, deepest, inside
        e = ct.parent_edge[f]
        k = 4 if not ct.children[f] else 2 + below
        if g is not None:
            cyc = _fundamental_cycle(bfs, e)
            deepest = max([deepest] + [bfs.level[x] for x in inside - cyc])
            base = path_base(bfs.level, e)
            while base + k // 2 <= deepest:
                k += 2
            deepest = base + k // 2
        ke[e] = k
        return max(below, k), deepest, inside

    visit(ct.root)
    return ke


@dataclass
class SubdividedGraph:
    graph: EmbeddedGraph
    original: EmbeddedGraph
    root: Vertex
    level: Dict[Vertex, int]  # BFS distance from the root in H
    paths: Dict[Edge, List[Vertex]]  # e -> Q_e including both ends, oriented from e[0]
    plan: Dict[Edge, int]
    provenance: Dict[Vertex, tuple]


def subdivision_vertex(e: Edge, j: int) -> str:
    return f"{e[0]}~{e[1]}#{j}"


def subdivide(g: EmbeddedGraph, plan: Dict[Edge, int], root: Optional[Vertex] = None) -> SubdividedGraph:
    """Replace each planned edge ``e`` by a path with ``plan[e]`` new vertices."""
    rot: Dict[Vertex, List[Vertex]] = {v: list(g.rotation[v]) for v in g.vertices}
    prov: Dict[Vertex, tuple] = {v: ("vertex", v) for v in g.vertices}
    paths: Dict[Edge, List[Vertex]] = {}
    for e, k in plan.items():
        u, v = e
        xs = [subdivision_vertex(e, j) for j in range(1, k + 1)]
        if any(x in rot for x in xs):
            raise ValueError(f"subdivision vertex name collides with an existing vertex on {e}")
        seq = [u] + xs + [v]
        rot[u][rot[u].index(v)] = xs[0]
        rot[v][rot[v].index(u)] = xs[-1]
        for j, x in enumerate(xs, start=1):
            rot[x] = [seq[j - 1], seq[j + 1]]
            prov[x] = ("subdivision", e, j)
        paths[e] = seq
    outer = g.outer
    h = validate_embedding(rot, outer)
    r = root if root is not None else (outer[0] if outer else g.vertices[0])
    level = bfs_tree(h, r).level
    return SubdividedGraph(h, g, r, level, paths, dict(plan), prov)


def extract_extension(h: SubdividedGraph) -> Dict[Edge, List[Vertex]]:
    """The centred piece ``P_e`` of every subdivided edge, endpoints equidistant from the root."""
    out: Dict[Edge, List[Vertex]] = {}
    lv = h.level
    for e, q in h.paths.items():
        k = len(q) - 2
        u, v = q[0], q[-1]
        if lv[u] > lv[v]:
            q = q[::-1]
            u, v = v, u
        xs = q[1:-1]
        if lv[u] == lv[v]:
            j = (k - 2) // 2
            cand = xs[j - 1: j + 3]
        else:
            j = k // 2
            cand = xs[j - 1: j + 2]
        if (
            len(cand) not in (3, 4)
            or lv[cand[0]] != lv[cand[-1]]
            or abs(lv[u] - lv[v]) > 1
            or k % 2
        ):
            raise NoEquidistantSubpath(f"no centred equidistant subpath on {e} (k={k})")
        out[e] = cand
    return out


@dataclass
class Decomposition:
    graph: EmbeddedGraph
    bfs: BFSTree
    cotree: Cotree
    plan: Dict[Edge, int]
    subdivided: SubdividedGraph
    tree: OrderedTree
    paths: Dict[Edge, List[Vertex]]
    report: AdmissibilityReport

    @property
    def offset(self) -> int:
        return sum(k // 2 for k in self.plan.values())

    @property
    def h(self) -> EmbeddedGraph:
        return self.subdivided.graph

    def path_list(self) -> List[List[Vertex]]:
        return [self.paths[e] for e in sorted(self.paths, key=lambda e: (self.graph.index(e[0]), self.graph.index(e[1])))]


def tree_minus_paths(h: EmbeddedGraph, paths) -> Dict[Vertex, Tuple[Vertex, ...]]:
    removed_edges = set()
    internal = set()
    for p in paths:
        for a, b in zip(p, p[1:]):
            removed_edges.add(frozenset((a, b)))
        internal.update(p[1:-1])
    rot = {}
    for v in h.vertices:
        if v in internal:
            continue
        rot[v] = tuple(u for u in h.rotation[v] if frozenset((u, v)) not in removed_edges)
    return rot


def decompose(g: EmbeddedGraph) -> Decomposition:
    if g.outer is None:
        r = g.vertices[0]
        t = natural_order({r: ()}, r, None)
        b = bfs_tree(g, r)
        ct = Cotree(0, {0: None}, {}, {0: []})
        sub = SubdividedGraph(g, g, r, {r: 0}, {}, {}, {r: ("vertex", r)})
        return Decomposition(g, b, ct, {}, sub, t, {}, AdmissibilityReport([]))
    r, s = g.outer
    b = bfs_tree(g, r, s)
    ct = cotree(g, b)
    plan = assign_ke(ct)
    sub = subdivide(g, plan, r)
    paths = extract_extension(sub)
    trot = tree_minus_paths(sub.graph, paths.values())
    t = natural_order(trot, r, s)
    ordered = [paths[e] for e in paths]
    report = check_admissible(t, ordered)
    for i, p in enumerate(ordered):
        if sub.level[p[0]] != sub.level[p[-1]]:
            report.violations.append(Violation(i, "level", "endpoints not equidistant from the root in H"))
        if t.level[p[0]] != sub.level[p[0]] or t.level[p[-1]] != sub.level[p[-1]]:
            report.violations.append(Violation(i, "level", "tree level differs from distance in H"))
    if not report.ok:
        raise AdmissibilityFailed(report)
    return Decomposition(g, b, ct, plan, sub, t, paths, report)
