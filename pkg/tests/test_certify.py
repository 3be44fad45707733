import random
from itertools import combinations

import pytest

from helpers import adjacency, corpus_reduction, graph, rational_ray_oracle
from rayreduce.certify import (
    PrecisionCapExceeded,
    SnappedScene,
    _snap,
    certified_reduce,
    exact_intersection_graph,
    snap_scene,
    verify_against,
)
from rayreduce.decompose import decompose
from rayreduce.exact_geom import Direction, IntPoint, OpenRay, orientation, ray_ray_intersect
from rayreduce.oracles import complement, max_clique, max_independent_set
from rayreduce.realfield import Approx, ApproxPoint, InsufficientPrecision
from rayreduce.represent import ParallelAt, represent_graph

GUARD = 64


def scene(g, B=256):
    d = decompose(g)
    return d, represent_graph(d, B + GUARD)


class TestSnap:
    @pytest.mark.parametrize("x,y", [(0, 0), (5, -7), (-(1 << 70), 3)])
    def test_lattice_point_is_fixed(self, x, y):
        B, bits = 32, 96
        s = bits - B
        p = ApproxPoint(Approx(x << s, 0, bits), Approx(y << s, 0, bits))
        assert _snap(p, B) == IntPoint(x, y)

    def test_half_cell_error_refused(self):
        p = ApproxPoint(Approx(0, 1 << 40, 96), Approx(0, 0, 96))
        with pytest.raises(InsufficientPrecision):
            _snap(p, 64)

    def test_child_rays_pass_through_parent_origin(self):
        g = graph("random-tree", 25, seed=4)
        d, s = scene(g)
        ss = snap_scene(s, 256)
        for v, p in d.tree.parent.items():
            if p is None:
                continue
            r = ss.rays[v]
            ahead = IntPoint(r.origin.x + r.dir.dx, r.origin.y + r.dir.dy)
            assert orientation(r.origin, ahead, ss.points[s.origin_of[p]]) == 0
            assert not ray_ray_intersect(r, ss.rays[p])

    def test_parallel_copies_share_direction(self):
        _, s = scene(graph("wheel", 5))
        ss = snap_scene(s, 256)
        par = [(v, r) for v, r in s.rays.items() if isinstance(r, ParallelAt)]
        assert par
        for v, r in par:
            assert ss.rays[v].dir == ss.rays[r.reference].dir


class TestIntersectionGraph:
    def test_three_crossing_rays(self):
        rays = {
            "a": OpenRay(IntPoint(-10, 0), Direction(1, 0)),
            "b": OpenRay(IntPoint(0, -10), Direction(0, 1)),
            "c": OpenRay(IntPoint(-10, -10), Direction(1, 1)),
        }
        adj = exact_intersection_graph(SnappedScene(0, [], rays))
        assert adj == {"a": {"b", "c"}, "b": {"a", "c"}, "c": {"a", "b"}}

    def test_matches_rational_oracle_on_random_scenes(self):
        rng = random.Random(5)
        fams = [("random-tree", 12), ("cycle", 5), ("wheel", 3), ("path", 6), ("star", 4), ("grid", 2)]
        for i in range(100):
            fam, size = fams[i % len(fams)]
            g = graph(fam, size, seed=rng.randrange(10 ** 6))
            B = rng.choice([24, 64])
            _, s = scene(g, B)
            ss = snap_scene(s, B)
            adj = exact_intersection_graph(ss)
            for u, v in combinations(ss.rays, 2):
                assert (v in adj[u]) == rational_ray_oracle(ss.rays[u], ss.rays[v])


class TestVerify:
    def test_c3_is_complement_of_c7(self):
        red = corpus_reduction("C3")
        assert red.certificate.passed and red.offset == 2
        h = red.decomposition.h
        adj = exact_intersection_graph(red.snapped)
        assert adj == complement(adjacency(h))
        assert max_independent_set(adjacency(h)).size == 3 == max_clique(adj).size

    def test_truncated_scale_fails(self):
        g = graph("random-tree", 30, seed=3)
        d = decompose(g)
        assert d.tree.depth == 8
        s = represent_graph(d, 320)
        # 4 bits cannot even keep the origins apart
        with pytest.raises(InsufficientPrecision):
            verify_against(snap_scene(s, 4), d.subdivided)
        cert = verify_against(snap_scene(s, 8), d.subdivided)
        assert not cert.passed and cert.mismatches
        u, v, expected, observed = cert.mismatches[0]
        assert expected != observed and expected == (not d.h.has_edge(u, v))

    def test_grid_truncated(self):
        d, s = scene(graph("grid", 3))
        cert = verify_against(snap_scene(s, 8), d.subdivided)
        assert not cert.passed and len(cert.mismatches) > 0

    def test_wrong_expected_graph(self):
        red = corpus_reduction("C4")
        with pytest.raises(ValueError):
            verify_against(red.snapped, graph("cycle", 4))

    @pytest.mark.parametrize("name", ["C3", "C4", "K4", "P4"])
    def test_pass_means_clique_equals_alpha(self, name):
        red = corpus_reduction(name)
        assert red.certificate.passed
        adj = exact_intersection_graph(red.snapped)
        assert max_clique(adj).size == max_independent_set(adjacency(red.decomposition.h)).size


class TestCertifiedReduce:
    def test_c3_bits_bound(self):
        c = corpus_reduction("C3").certificate
        assert c.passed and c.n == 7 and c.max_coordinate_bits <= 50 * 7 ** 3

    def test_grid_clique_identity(self):
        red = corpus_reduction("grid3")
        omega = max_clique(exact_intersection_graph(red.snapped)).size
        assert omega == max_independent_set(adjacency(red.decomposition.graph)).size + red.offset

    def test_deterministic(self):
        g = graph("wheel", 3)
        a, b = certified_reduce(g), certified_reduce(g)
        assert a.snapped.rays == b.snapped.rays and a.snapped.points == b.snapped.points
        ca, cb = a.certificate, b.certificate
        assert (ca.passed, ca.scale_bits, ca.retries, ca.max_coordinate_bits) == (cb.passed, cb.scale_bits, cb.retries, cb.max_coordinate_bits)

    def test_cap_exceeded(self):
        with pytest.raises(PrecisionCapExceeded):
            certified_reduce(graph("grid", 3), start_bits=4, cap_constant=0)

    def test_doubling_retries(self):
        red = certified_reduce(graph("random-tree", 30, seed=3), start_bits=4)
        c = red.certificate
        assert c.passed and c.retries > 0 and c.scale_bits == 4 << c.retries

    def test_single_vertex(self):
        red = certified_reduce(graph("path", 1))
        assert red.certificate.passed and len(red.snapped.rays) == 1
