import itertools
import json
import shutil
import subprocess
import sys

import pytest

from helpers import rational_ray_oracle
from rayreduce.cli import main
from rayreduce.documents import CertificateDocument, GraphDocument, RayDocument, dumps, load_expected_graph

K5 = {
    "format": "rayreduce.graph",
    "version": 1,
    "vertices": list("abcde"),
    "rotation": {v: [u for u in "abcde" if u != v] for v in "abcde"},
    "outer": ["a", "b"],
}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def c3(tmp_path, capsys):
    p = tmp_path / "c3.graph.json"
    assert run(capsys, "gen", "cycle", 3, "-o", p)[0] == 0
    return p


def reduce_to(capsys, graph, out):
    code, stdout, _ = run(capsys, "reduce", graph, "--out-dir", out)
    return code, json.loads(stdout)


class TestGen:
    def test_stdout(self, capsys):
        code, out, _ = run(capsys, "gen", "grid", 3)
        doc = json.loads(out)
        assert code == 0 and len(doc["vertices"]) == 9

    def test_unknown_family(self, capsys):
        code, _, err = run(capsys, "gen", "hypercube", 3)
        assert code == 2 and json.loads(err)["error"] == "UnknownFamily"

    def test_random_tree_seeded(self, capsys):
        a = run(capsys, "gen", "random-tree", 30, "--seed", 7)[1]
        b = run(capsys, "gen", "random-tree", 30, "--seed", 7)[1]
        assert a == b


class TestReduce:
    def test_c3(self, c3, tmp_path, capsys):
        code, summary = reduce_to(capsys, c3, tmp_path / "out")
        assert code == 0 and summary["passed"] and summary["rays"] == 7 and summary["offset"] == 2
        for name in ("c3.rays.json", "c3.cert.json", "c3.decomp.json"):
            assert (tmp_path / "out" / name).exists()
        cert = CertificateDocument.loads((tmp_path / "out" / "c3.cert.json").read_text())
        assert cert.passed and cert.max_coordinate_bits <= 50 * 7 ** 3

    def test_tree(self, tmp_path, capsys):
        g = tmp_path / "tree.graph.json"
        run(capsys, "gen", "random-tree", 15, "--seed", 2, "-o", g)
        code, summary = reduce_to(capsys, g, tmp_path)
        assert code == 0 and summary["offset"] == 0 and summary["rays"] == 15

    def test_k5_rejected(self, tmp_path, capsys):
        g = tmp_path / "k5.graph.json"
        g.write_text(dumps(K5))
        code, _, err = run(capsys, "reduce", g, "--out-dir", tmp_path)
        assert code == 2 and json.loads(err)["error"] == "NotPlanarEmbedding"

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "reduce", tmp_path / "nope.json")
        assert code == 2 and json.loads(err)["error"] == "InputError"

    def test_precision_cap(self, tmp_path, capsys):
        g = tmp_path / "grid.graph.json"
        run(capsys, "gen", "grid", 3, "-o", g)
        code, _, err = run(capsys, "reduce", g, "--out-dir", tmp_path, "--precision-start", 4, "--bit-cap-constant", 0)
        assert code == 3 and json.loads(err)["error"] == "PrecisionCapExceeded"


class TestVerify:
    def test_idempotent(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        code, out, _ = run(capsys, "verify", tmp_path / "c3.rays.json", tmp_path / "c3.decomp.json")
        assert code == 0 and json.loads(out)["passed"]

    def test_perturbed_origin_lists_exact_pairs(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        h = load_expected_graph((tmp_path / "c3.decomp.json").read_text()).to_graph()
        doc = RayDocument.loads((tmp_path / "c3.rays.json").read_text())
        for i in range(len(doc.rays)):
            bad = RayDocument.loads((tmp_path / "c3.rays.json").read_text())
            e = bad.rays[i]
            bad.rays[i] = type(e)(e.id, e.vertex, (e.origin[0] + 1, e.origin[1]), e.direction)
            p = tmp_path / "bad.rays.json"
            p.write_text(bad.dumps())
            code, out, _ = run(capsys, "verify", p, tmp_path / "c3.decomp.json")
            cert = json.loads(out)
            rays = {r.vertex: r.to_ray() for r in bad.rays}
            expected = sorted(
                (u, v) for u, v in itertools.combinations(h.vertices, 2)
                if rational_ray_oracle(rays[u], rays[v]) == h.has_edge(u, v)
            )
            assert sorted((m["u"], m["v"]) for m in cert["mismatches"]) == expected
            assert code == (0 if not expected else 1)

    def test_corrupted_direction_fails(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        doc = RayDocument.loads((tmp_path / "c3.rays.json").read_text())
        e = doc.rays[0]
        doc.rays[0] = type(e)(e.id, e.vertex, e.origin, (-e.direction[0], -e.direction[1]))
        p = tmp_path / "flipped.rays.json"
        p.write_text(doc.dumps())
        code, out, _ = run(capsys, "verify", p, tmp_path / "c3.decomp.json")
        assert code == 1 and json.loads(out)["mismatches"]

    def test_wrong_expected(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        h = load_expected_graph((tmp_path / "c3.decomp.json").read_text())
        # the same seven names arranged in a different 7-cycle
        vs = h.vertices
        cyc = [vs[(3 * j) % 7] for j in range(7)]
        rot = {v: [cyc[(j - 1) % 7], cyc[(j + 1) % 7]] for j, v in enumerate(cyc)}
        wrong = GraphDocument(list(vs), rot, (cyc[0], cyc[1]))
        p = tmp_path / "wrong.graph.json"
        p.write_text(wrong.dumps())
        code, out, _ = run(capsys, "verify", tmp_path / "c3.rays.json", p)
        assert code == 1 and json.loads(out)["mismatches"]

    def test_unrelated_expected_is_input_error(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        other = tmp_path / "c7.graph.json"
        run(capsys, "gen", "cycle", 7, "-o", other)
        assert run(capsys, "verify", tmp_path / "c3.rays.json", other)[0] == 2


class TestRender:
    def test_frame_only(self, tmp_path, capsys):
        out = tmp_path / "f.svg"
        assert run(capsys, "render", "--frame", 5, "-o", out)[0] == 0
        svg = out.read_text()
        for i in range(5):
            assert f'id="p{i}"' in svg
        for i in (1, 2, 3):
            assert f'id="R{i}"' in svg and f'id="alpha{i}"' in svg

    def test_scene(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        out = tmp_path / "c3.svg"
        assert run(capsys, "render", tmp_path / "c3.rays.json", "-o", out)[0] == 0
        svg = out.read_text()
        assert svg.count("data-vertex=") == 7
        assert 'class="origin"' in svg

    def test_needs_something(self, tmp_path, capsys):
        assert run(capsys, "render", "-o", tmp_path / "x.svg")[0] == 2

    def test_deterministic(self, c3, tmp_path, capsys):
        reduce_to(capsys, c3, tmp_path)
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        run(capsys, "render", tmp_path / "c3.rays.json", "-o", a)
        run(capsys, "render", tmp_path / "c3.rays.json", "-o", b)
        assert a.read_bytes() == b.read_bytes()


@pytest.mark.skipif(shutil.which("rayreduce") is None, reason="console script not installed")
def test_console_script(tmp_path):
    p = subprocess.run(["rayreduce", "gen", "cycle", "4"], capture_output=True, text=True, check=True)
    assert json.loads(p.stdout)["metadata"]["family"] == "cycle"
    p = subprocess.run([sys.executable, "-m", "rayreduce.cli", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and "rayreduce" in p.stdout
