import json

import pytest

from helpers import corpus_reduction
from rayreduce.certify import verify_against
from rayreduce.documents import (
    CertificateDocument,
    DecompositionDocument,
    DocumentError,
    GraphDocument,
    RayDocument,
    dumps,
    load_expected_graph,
    scene_recipes_from_dict,
)
from rayreduce.generators import generate


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


class TestGraphDocument:
    def test_roundtrip(self):
        doc = GraphDocument.from_dict(generate("wheel", 5))
        assert GraphDocument.loads(doc.dumps()) == doc

    def test_from_graph_roundtrip(self):
        g = GraphDocument.from_dict(generate("grid", 3)).to_graph()
        again = GraphDocument.from_graph(g).to_graph()
        assert again.rotation == g.rotation and again.outer == g.outer

    @pytest.mark.parametrize("text", [
        "not json",
        json.dumps({"format": "other", "version": 1}),
        json.dumps({"format": "rayreduce.graph", "version": 99, "vertices": [], "rotation": {}}),
        json.dumps({"format": "rayreduce.graph", "version": 1, "vertices": ["a"], "rotation": {"b": []}}),
        json.dumps({"format": "rayreduce.graph", "version": 1, "vertices": ["a"], "rotation": {"a": []}, "outer": "a"}),
    ])
    def test_rejects_malformed(self, text):
        with pytest.raises(DocumentError):
            GraphDocument.loads(text)


class TestRayDocument:
    def test_roundtrip(self):
        doc = RayDocument.from_reduction(corpus_reduction("C3"))
        assert RayDocument.loads(doc.dumps()) == doc

    def test_big_integers_are_strings(self):
        obj = json.loads(RayDocument.from_reduction(corpus_reduction("C3")).dumps())
        assert all(isinstance(x, str) for r in obj["rays"] for x in r["origin"] + r["direction"])
        assert max(abs(int(x)) for r in obj["rays"] for x in r["origin"]).bit_length() > 64

    def test_to_snapped_verifies(self):
        red = corpus_reduction("K4")
        ss = RayDocument.loads(RayDocument.from_reduction(red).dumps()).to_snapped()
        assert ss.rays == red.snapped.rays
        assert verify_against(ss, red.decomposition.h).passed

    def test_scene_dag_roundtrip(self):
        red = corpus_reduction("C3")
        doc = RayDocument.from_reduction(red)
        nodes, rays = scene_recipes_from_dict(doc.scene)
        assert nodes == red.scene.nodes and rays == red.scene.rays

    def test_zero_direction_rejected(self):
        obj = json.loads(RayDocument.from_reduction(corpus_reduction("C3")).dumps())
        obj["rays"][0]["direction"] = ["0", "0"]
        with pytest.raises(DocumentError):
            RayDocument.from_dict(obj)

    def test_duplicate_vertex_rejected(self):
        doc = RayDocument.from_reduction(corpus_reduction("C3"))
        doc.rays.append(doc.rays[0])
        with pytest.raises(DocumentError):
            doc.to_snapped()


class TestCertificateDocument:
    def test_roundtrip(self):
        doc = CertificateDocument.from_certificate(corpus_reduction("C4").certificate, {"graph": "x"})
        assert CertificateDocument.loads(doc.dumps()) == doc
        assert "seconds" not in json.loads(doc.dumps())

    def test_timing_opt_in(self):
        doc = CertificateDocument.from_certificate(corpus_reduction("C4").certificate, {}, timing=True)
        assert "seconds" in json.loads(doc.dumps())


class TestDecompositionDocument:
    def test_roundtrip(self):
        doc = DecompositionDocument.from_decomposition(corpus_reduction("grid3").decomposition)
        assert DecompositionDocument.loads(doc.dumps()) == doc

    def test_expected_graph_from_either_kind(self):
        d = corpus_reduction("C3").decomposition
        doc = DecompositionDocument.from_decomposition(d)
        a = load_expected_graph(doc.dumps()).to_graph()
        b = load_expected_graph(GraphDocument.from_graph(d.h).dumps()).to_graph()
        assert a.rotation == b.rotation == d.h.rotation
