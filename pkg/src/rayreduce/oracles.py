"""Exact independence and clique numbers by branch and bound.

Graphs are plain adjacency maps ``{vertex: set(neighbours)}``. Before each
branching step the solver applies the safe low-degree rules: isolated and
pendant vertices are taken, a degree-2 vertex in a triangle is taken, and any
other degree-2 vertex is folded with its two neighbours. Long subdivision
paths therefore collapse without branching.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Set, Tuple

V = Hashable
Adj = Dict[V, Set[V]]

SPARSE_CAP = 200
GENERAL_CAP = 64


class TooLarge(ValueError):
    pass


class OddCount(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    size: int
    witness: FrozenSet[V]
    nodes: int
    seconds: float


# graph helpers -----------------------------------------------------------


def graph_from_edges(vertices: Iterable[V], edges: Iterable[Tuple[V, V]]) -> Adj:
    adj: Adj = {v: set() for v in vertices}
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at {u!r}")
        adj[u].add(v)
        adj[v].add(u)
    return adj


def complement(adj: Mapping[V, Set[V]]) -> Adj:
    vs = list(adj)
    return {v: {u for u in vs if u != v and u not in adj[v]} for v in vs}


def n_edges(adj: Mapping[V, Set[V]]) -> int:
    return sum(len(ns) for ns in adj.values()) // 2


def is_independent(adj: Mapping[V, Set[V]], s: Iterable[V]) -> bool:
    s = list(s)
    return all(u in adj for u in s) and not any(b in adj[a] for a, b in itertools.combinations(s, 2))


def is_clique(adj: Mapping[V, Set[V]], s: Iterable[V]) -> bool:
    s = list(s)
    return all(u in adj for u in s) and all(b in adj[a] for a, b in itertools.combinations(s, 2))


# solver ------------------------------------------------------------------


class _Fold:
    __slots__ = ("n",)

    def __init__(self, n: int):
        self.n = n

    def __repr__(self) -> str:
        return f"<fold {self.n}>"


def _key(v: V):
    return (1, v.n, "") if isinstance(v, _Fold) else (0, 0, str(v))


class _Solver:
    def __init__(self):
        self.nodes = 0
        self.folds = 0

    def _remove(self, adj: Adj, vs: Iterable[V]) -> None:
        for v in list(vs):
            if v in adj:
                for u in adj.pop(v):
                    if u in adj:
                        adj[u].discard(v)

    def reduce(self, adj: Adj) -> Tuple[List[V], List[Tuple[V, V, V, V]]]:
        """Apply low-degree rules in place; returns taken vertices and fold records."""
        taken: List[V] = []
        folds: List[Tuple[V, V, V, V]] = []
        todo = sorted(adj, key=_key)
        while todo:
            nxt: List[V] = []
            for v in todo:
                if v not in adj:
                    continue
                d = len(adj[v])
                if d > 2:
                    continue
                ns = sorted(adj[v], key=_key)
                if d == 2 and ns[1] not in adj[ns[0]]:
                    a, b = ns
                    self.folds += 1
                    x = _Fold(self.folds)
                    nbrs = (adj[a] | adj[b]) - {v, a, b}
                    self._remove(adj, (v, a, b))
                    adj[x] = set(nbrs)
                    for u in nbrs:
                        adj[u].add(x)
                    folds.append((x, v, a, b))
                    nxt.append(x)
                    nxt.extend(nbrs)
                    continue
                taken.append(v)
                touched = set()
                for u in adj[v]:
                    touched |= adj[u]
                self._remove(adj, [v] + ns)
                nxt.extend(touched)
            todo = sorted({u for u in nxt if u in adj}, key=_key)
        return taken, folds

    @staticmethod
    def unfold(s: Set[V], folds: List[Tuple[V, V, V, V]]) -> Set[V]:
        s = set(s)
        for x, v, a, b in reversed(folds):
            if x in s:
                s.discard(x)
                s.update((a, b))
            else:
                s.add(v)
        return s

    @staticmethod
    def clique_cover_bound(adj: Adj) -> int:
        cliques: List[Set[V]] = []
        for v in sorted(adj, key=lambda u: (-len(adj[u]), _key(u))):
            for c in cliques:
                if c <= adj[v]:
                    c.add(v)
                    break
            else:
                cliques.append({v})
        return len(cliques)

    @staticmethod
    def components(adj: Adj) -> List[Set[V]]:
        seen: Set[V] = set()
        out = []
        for v in sorted(adj, key=_key):
            if v in seen:
                continue
            comp = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for u in adj[x]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            out.append(comp)
        return out

    def solve(self, adj: Adj, floor: int) -> Optional[Set[V]]:
        """An independent set larger than ``floor``, if one exists; maximum among those."""
        self.nodes += 1
        adj = {v: set(ns) for v, ns in adj.items()}
        taken, folds = self.reduce(adj)
        extra = len(taken) + len(folds)
        comps = self.components(adj)
        if len(comps) > 1:
            s: Set[V] = set()
            for c in comps:
                sub = {v: adj[v] & c for v in c}
                s |= self.solve(sub, -1) or set()
            return self.unfold(s | set(taken), folds)
        if not adj:
            return self.unfold(set(taken), folds)
        if extra + self.clique_cover_bound(adj) <= floor:
            return None
        v = min(adj, key=lambda u: (-len(adj[u]), _key(u)))
        local_floor = floor - extra
        best: Optional[Set[V]] = None
        inc_adj = {u: ns - adj[v] - {v} for u, ns in adj.items() if u != v and u not in adj[v]}
        inc = self.solve(inc_adj, local_floor - 1)
        if inc is not None:
            best = inc | {v}
            local_floor = max(local_floor, len(best))
        exc_adj = {u: ns - {v} for u, ns in adj.items() if u != v}
        exc = self.solve(exc_adj, local_floor)
        if exc is not None and (best is None or len(exc) > len(best)):
            best = exc
        if best is None:
            return None
        return self.unfold(best | set(taken), folds)


def _cap_for(adj: Mapping[V, Set[V]]) -> int:
    return SPARSE_CAP if n_edges(adj) <= 2 * len(adj) else GENERAL_CAP


def max_independent_set(adj: Mapping[V, Set[V]], cap: Optional[int] = None) -> SolveResult:
    limit = _cap_for(adj) if cap is None else cap
    if len(adj) > limit:
        raise TooLarge(f"{len(adj)} vertices exceed the cap of {limit}")
    t0 = time.perf_counter()
    solver = _Solver()
    s = solver.solve({v: set(ns) for v, ns in adj.items()}, -1) or set()
    if not is_independent(adj, s):
        raise AssertionError("solver produced a dependent witness")
    return SolveResult(len(s), frozenset(s), solver.nodes, time.perf_counter() - t0)


def max_clique(adj: Mapping[V, Set[V]], cap: Optional[int] = None) -> SolveResult:
    co = complement(adj)
    limit = _cap_for(co) if cap is None else cap
    r = max_independent_set(co, cap=limit)
    if not is_clique(adj, r.witness):
        raise AssertionError("solver produced a non-clique witness")
    return r


# subdivisions ------------------------------------------------------------


def _edge_count(counts: Mapping, u: V, v: V) -> int:
    for key in ((u, v), (v, u), frozenset((u, v))):
        if key in counts:
            return counts[key]
    return 0


def even_subdivide(adj: Mapping[V, Set[V]], counts: Mapping) -> Adj:
    """Replace edge ``uv`` by a path with ``counts[uv]`` new internal vertices."""
    for c in counts.values():
        if c < 0 or c % 2:
            raise OddCount(f"subdivision count {c} is not a non-negative even number")
    vs = list(adj)
    index = {v: i for i, v in enumerate(vs)}
    out: Adj = {v: set() for v in vs}
    for u in vs:
        for v in adj[u]:
            if index[u] > index[v]:
                continue
            c = _edge_count(counts, u, v)
            seq = [u] + [f"{u}~{v}#{j}" for j in range(1, c + 1)] + [v]
            for a, b in zip(seq, seq[1:]):
                out.setdefault(a, set()).add(b)
                out.setdefault(b, set()).add(a)
    return out


def check_even_subdivision_lemma(adj: Mapping[V, Set[V]], counts: Mapping) -> bool:
    sub = even_subdivide(adj, counts)
    return max_independent_set(sub).size == max_independent_set(adj).size + sum(counts.values()) // 2
