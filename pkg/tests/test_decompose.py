import pytest

from helpers import CORPUS, corpus_graph, decomposition_violations, graph, is_even_subdivision
from rayreduce.decompose import (
    Cotree,
    NoEquidistantSubpath,
    assign_ke,
    cotree,
    decompose,
    extract_extension,
    subdivide,
)
from rayreduce.oracles import max_independent_set
from rayreduce.planar import bfs_tree, validate_embedding

C4 = {"r": ["a", "c"], "a": ["b", "r"], "b": ["c", "a"], "c": ["r", "b"]}


def manual_cotree(parent):
    """Cotree without a graph; face 0 is the root and the edge into face f is named ('e', f)."""
    children = {f: [] for f in [0, *parent]}
    for f, p in parent.items():
        children[p].append(f)
    return Cotree(0, {0: None, **parent}, {f: ("e", f) for f in parent}, children)


def adj(g):
    return {v: set(g.rotation[v]) for v in g.vertices}


class TestCotree:
    def test_c4_single_edge(self):
        g = validate_embedding(C4, ("r", "a"))
        ct = cotree(g, bfs_tree(g, "r", "a"))
        assert len(ct.edges) == 1 and len(ct.parent) == 2

    def test_k4_spans_four_faces(self):
        g = graph("wheel", 3)
        ct = cotree(g, bfs_tree(g, g.outer[0], g.outer[1]))
        assert len(ct.edges) == 3 and len(ct.parent) == 4

    def test_tree_input_is_single_face(self):
        g = graph("random-tree", 15, seed=2)
        ct = cotree(g, bfs_tree(g, g.outer[0]))
        assert ct.edges == [] and list(ct.parent) == [ct.root]

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_size_is_cycle_rank(self, name):
        g = corpus_graph(name)
        if g.outer is None:
            return
        ct = cotree(g, bfs_tree(g, g.outer[0], g.outer[1]))
        assert len(ct.edges) == g.n_edges - len(g.vertices) + 1


class TestAssignKe:
    def test_single_edge(self):
        assert assign_ke(manual_cotree({1: 0})) == {("e", 1): 4}

    def test_chain(self):
        assert assign_ke(manual_cotree({1: 0, 2: 1})) == {("e", 1): 6, ("e", 2): 4}

    def test_star(self):
        assert set(assign_ke(manual_cotree({1: 0, 2: 0, 3: 0})).values()) == {4}

    def test_uses_largest_descendant(self):
        ke = assign_ke(manual_cotree({1: 0, 2: 1, 3: 1, 4: 3}))
        assert ke[("e", 4)] == 4 and ke[("e", 3)] == 6 and ke[("e", 2)] == 4 and ke[("e", 1)] == 8

    def test_deterministic(self):
        ct = manual_cotree({1: 0, 2: 1, 3: 0, 4: 3, 5: 4})
        assert assign_ke(ct) == assign_ke(ct)


class TestSubdivide:
    def test_c3_becomes_c7(self):
        d = decompose(graph("cycle", 3))
        h = d.h
        assert len(h.vertices) == 7 and h.n_edges == 7 and all(len(h.rotation[v]) == 2 for v in h.vertices)

    def test_c4_becomes_c8(self):
        g = validate_embedding(C4, ("r", "a"))
        sub = subdivide(g, {("b", "c"): 4}, "r")
        assert len(sub.graph.vertices) == 8 and sub.graph.n_edges == 8

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_vertex_count(self, name):
        d = decompose(corpus_graph(name))
        assert len(d.h.vertices) == len(d.graph.vertices) + sum(d.plan.values())
        assert is_even_subdivision(d.graph, d.subdivided, d.plan)


class TestExtract:
    def test_c3_four_vertex_piece(self):
        d = decompose(graph("cycle", 3))
        (e, p), = d.paths.items()
        q = d.subdivided.paths[e]
        assert p == q[1:5]
        assert [d.subdivided.level[x] for x in (p[0], p[-1])] == [2, 2]

    def test_c4_cross_level_piece(self):
        g = validate_embedding(C4, ("r", "a"))
        d = decompose(g)
        assert d.plan == {("b", "c"): 4}
        # counted from c (level 1): c, x1..x4, b, so the piece is x2 x3 x4
        q = d.subdivided.paths[("b", "c")][::-1]
        assert q[0] == "c"
        assert d.paths[("b", "c")] == q[2:5]
        assert {d.subdivided.level[x] for x in (q[2], q[4])} == {3}

    def test_odd_count_rejected(self):
        g = graph("cycle", 3)
        sub = subdivide(g, {("1", "2"): 3}, "0")
        with pytest.raises(NoEquidistantSubpath):
            extract_extension(sub)


class TestDecompose:
    def test_c3(self):
        d = decompose(graph("cycle", 3))
        assert len(d.tree) == 5 and d.offset == 2 and len(d.paths) == 1

    def test_tree_input(self):
        g = graph("random-tree", 20, seed=4)
        d = decompose(g)
        assert d.offset == 0 and d.paths == {} and len(d.tree) == 20

    def test_c4_offset_and_mis(self):
        d = decompose(graph("cycle", 4))
        assert d.offset == 2
        assert max_independent_set(adj(d.h)).size == 4 == max_independent_set(adj(d.graph)).size + d.offset

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_invariants(self, name):
        assert decomposition_violations(decompose(corpus_graph(name))) == []

    @pytest.mark.parametrize("name", list(CORPUS))
    def test_alpha_identity(self, name):
        d = decompose(corpus_graph(name))
        assert max_independent_set(adj(d.h)).size == max_independent_set(adj(d.graph)).size + d.offset
