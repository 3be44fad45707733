"""JSON documents exchanged by the command line tool.

Every document carries ``format`` and ``version`` keys. Big integers are
written as decimal strings. Serialization uses sorted keys and a fixed indent,
so identical content always produces identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .certify import Certificate, Reduction, SnappedScene
from .decompose import Decomposition
from .exact_geom import Direction, IntPoint, OpenRay
from .planar import EmbeddedGraph, validate_embedding
from .represent import (
    ArcCenter,
    ArcEndpoint,
    ArcSpacing,
    FramePoint,
    LineArcMeet,
    LineThroughTwo,
    NearPoint,
    ParallelAt,
    Scene,
    ThroughTwo,
)

VERSION = 1


class DocumentError(ValueError):
    """Malformed or unexpected document content."""


def dumps(obj: Dict[str, Any]) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_json(text: str) -> Dict[str, Any]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    return obj


def _expect(obj: Dict[str, Any], fmt: str) -> None:
    if obj.get("format") != fmt:
        raise DocumentError(f"expected format {fmt!r}, got {obj.get('format')!r}")
    if obj.get("version") != VERSION:
        raise DocumentError(f"unsupported {fmt} version {obj.get('version')!r}")


def _int(s: Any, what: str) -> int:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise DocumentError(f"{what} must be a decimal string")
    try:
        return int(s)
    except ValueError as exc:
        raise DocumentError(f"{what}: {s!r} is not an integer") from exc


# graphs -------------------------------------------------------------------


@dataclass
class GraphDocument:
    vertices: List[str]
    rotation: Dict[str, List[str]]
    outer: Optional[Tuple[str, str]]
    metadata: Dict[str, Any] = field(default_factory=dict)

    FORMAT = "rayreduce.graph"

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "GraphDocument":
        _expect(obj, cls.FORMAT)
        try:
            verts = [str(v) for v in obj["vertices"]]
            rot = {str(v): [str(u) for u in ns] for v, ns in obj["rotation"].items()}
        except (KeyError, AttributeError, TypeError) as exc:
            raise DocumentError(f"graph document needs 'vertices' and 'rotation': {exc}") from exc
        if set(verts) != set(rot) or len(verts) != len(rot):
            raise DocumentError("'vertices' and the keys of 'rotation' differ")
        outer = obj.get("outer")
        if outer is not None:
            if not isinstance(outer, list) or len(outer) != 2:
                raise DocumentError("'outer' must be a pair [u, v]")
            outer = (str(outer[0]), str(outer[1]))
        meta = obj.get("metadata") or {}
        if not isinstance(meta, dict):
            raise DocumentError("'metadata' must be an object")
        return cls(verts, rot, outer, meta)

    @classmethod
    def loads(cls, text: str) -> "GraphDocument":
        return cls.from_dict(_load_json(text))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": self.FORMAT,
            "version": VERSION,
            "vertices": list(self.vertices),
            "rotation": {v: list(self.rotation[v]) for v in self.vertices},
            "outer": list(self.outer) if self.outer else None,
            "metadata": dict(self.metadata),
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())

    def to_graph(self) -> EmbeddedGraph:
        rot = {v: self.rotation[v] for v in self.vertices}
        return validate_embedding(rot, self.outer)

    @classmethod
    def from_graph(cls, g: EmbeddedGraph, metadata: Optional[Dict[str, Any]] = None) -> "GraphDocument":
        return cls(
            [str(v) for v in g.vertices],
            {str(v): [str(u) for u in g.rotation[v]] for v in g.vertices},
            (str(g.outer[0]), str(g.outer[1])) if g.outer else None,
            dict(metadata or {}),
        )


# rays ---------------------------------------------------------------------

_RECIPES = {c.__name__: c for c in (FramePoint, ArcEndpoint, ArcCenter, LineArcMeet, ArcSpacing, NearPoint)}
_RAY_RECIPES = {c.__name__: c for c in (ThroughTwo, ParallelAt, LineThroughTwo)}


def _recipe_to_dict(r) -> Dict[str, Any]:
    d = {"kind": type(r).__name__}
    for k, v in asdict(r).items():
        d[k] = str(v) if isinstance(v, Fraction) else v
    return d


def _recipe_from_dict(d: Dict[str, Any], table) -> Any:
    d = dict(d)
    try:
        cls = table[d.pop("kind")]
    except KeyError as exc:
        raise DocumentError(f"unknown recipe kind {exc}") from exc
    if "fraction" in d:
        d["fraction"] = Fraction(d["fraction"])
    try:
        return cls(**d)
    except TypeError as exc:
        raise DocumentError(f"bad {cls.__name__} recipe: {exc}") from exc


def scene_to_dict(s: Scene) -> Dict[str, Any]:
    return {
        "k": s.frame.k,
        "nodes": [_recipe_to_dict(r) for r in s.nodes],
        "rays": {str(v): _recipe_to_dict(r) for v, r in s.rays.items()},
        "level_order": {str(i): [str(v) for v in vs] for i, vs in s.level_order.items()},
        "attachments": [
            {"path": [str(x) for x in a.path], "case": a.case, "scenario": a.scenario}
            for a in s.attachments
        ],
    }


def scene_recipes_from_dict(obj: Dict[str, Any]):
    nodes = [_recipe_from_dict(d, _RECIPES) for d in obj["nodes"]]
    rays = {v: _recipe_from_dict(d, _RAY_RECIPES) for v, d in obj["rays"].items()}
    return nodes, rays


@dataclass
class RayEntry:
    id: int
    vertex: str
    origin: Tuple[int, int]
    direction: Tuple[int, int]

    def to_ray(self) -> OpenRay:
        return OpenRay(IntPoint(*self.origin), Direction(*self.direction))


@dataclass
class RayDocument:
    scale_bits: int
    k: int
    offset: int
    rays: List[RayEntry]
    provenance: Dict[str, Any] = field(default_factory=dict)
    scene: Optional[Dict[str, Any]] = None

    FORMAT = "rayreduce.rays"

    @classmethod
    def from_reduction(cls, red: Reduction) -> "RayDocument":
        ss = red.snapped
        prov = {}
        for v, p in red.decomposition.subdivided.provenance.items():
            if p[0] == "vertex":
                prov[str(v)] = ["vertex", str(p[1])]
            else:
                prov[str(v)] = ["subdivision", [str(p[1][0]), str(p[1][1])], p[2]]
        entries = []
        for i, v in enumerate(red.decomposition.h.vertices):
            r = ss.rays[v]
            entries.append(RayEntry(i, str(v), (r.origin.x, r.origin.y), (r.dir.dx, r.dir.dy)))
        return cls(ss.scale_bits, ss.k, red.offset, entries, prov, scene_to_dict(red.scene))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": self.FORMAT,
            "version": VERSION,
            "scale_bits": self.scale_bits,
            "k": self.k,
            "offset": self.offset,
            "rays": [
                {
                    "id": e.id,
                    "vertex": e.vertex,
                    "origin": [str(e.origin[0]), str(e.origin[1])],
                    "direction": [str(e.direction[0]), str(e.direction[1])],
                }
                for e in self.rays
            ],
            "provenance": self.provenance,
            "scene": self.scene,
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "RayDocument":
        _expect(obj, cls.FORMAT)
        try:
            entries = []
            for e in obj["rays"]:
                o = (_int(e["origin"][0], "origin x"), _int(e["origin"][1], "origin y"))
                d = (_int(e["direction"][0], "direction x"), _int(e["direction"][1], "direction y"))
                if d == (0, 0):
                    raise DocumentError(f"ray {e.get('vertex')!r} has a zero direction")
                entries.append(RayEntry(int(e["id"]), str(e["vertex"]), o, d))
            return cls(int(obj["scale_bits"]), int(obj["k"]), int(obj["offset"]), entries,
                       obj.get("provenance") or {}, obj.get("scene"))
        except (KeyError, TypeError, IndexError) as exc:
            raise DocumentError(f"malformed ray document: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> "RayDocument":
        return cls.from_dict(_load_json(text))

    def to_snapped(self) -> SnappedScene:
        rays = {}
        for e in self.rays:
            if e.vertex in rays:
                raise DocumentError(f"vertex {e.vertex!r} has two rays")
            rays[e.vertex] = e.to_ray()
        return SnappedScene(self.scale_bits, [], rays, self.k)


# certificates ---------------------------------------------------------------


@dataclass
class CertificateDocument:
    passed: bool
    scale_bits: int
    retries: int
    mismatches: List[Dict[str, Any]]
    max_coordinate_bits: int
    n: int
    bit_cap: Optional[int]
    tool_version: str
    inputs: Dict[str, str]
    seconds: Optional[float] = None

    FORMAT = "rayreduce.certificate"

    @classmethod
    def from_certificate(cls, c: Certificate, inputs: Dict[str, str], timing: bool = False) -> "CertificateDocument":
        mism = [{"u": str(u), "v": str(v), "expected": e, "observed": o} for u, v, e, o in c.mismatches]
        return cls(c.passed, c.scale_bits, c.retries, mism, c.max_coordinate_bits, c.n, c.bit_cap,
                   __version__, dict(inputs), c.seconds if timing else None)

    def to_dict(self) -> Dict[str, Any]:
        d = {
            "format": self.FORMAT,
            "version": VERSION,
            "passed": self.passed,
            "scale_bits": self.scale_bits,
            "retries": self.retries,
            "mismatches": self.mismatches,
            "max_coordinate_bits": self.max_coordinate_bits,
            "n": self.n,
            "bit_cap": self.bit_cap,
            "tool_version": self.tool_version,
            "inputs": self.inputs,
        }
        if self.seconds is not None:
            d["seconds"] = self.seconds
        return d

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "CertificateDocument":
        _expect(obj, cls.FORMAT)
        try:
            return cls(bool(obj["passed"]), int(obj["scale_bits"]), int(obj["retries"]), list(obj["mismatches"]),
                       int(obj["max_coordinate_bits"]), int(obj["n"]), obj.get("bit_cap"),
                       str(obj["tool_version"]), dict(obj["inputs"]), obj.get("seconds"))
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed certificate document: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> "CertificateDocument":
        return cls.from_dict(_load_json(text))


# decompositions -------------------------------------------------------------


@dataclass
class DecompositionDocument:
    root: str
    first: Optional[str]
    offset: int
    plan: List[Dict[str, Any]]
    paths: List[List[str]]
    order: List[str]
    level: Dict[str, int]
    h: Dict[str, Any]

    FORMAT = "rayreduce.decomposition"

    @classmethod
    def from_decomposition(cls, d: Decomposition) -> "DecompositionDocument":
        plan = [{"edge": [str(e[0]), str(e[1])], "k": k} for e, k in d.plan.items()]
        return cls(
            str(d.tree.root),
            None if d.tree.first is None else str(d.tree.first),
            d.offset,
            plan,
            [[str(x) for x in p] for p in d.path_list()],
            [str(v) for v in d.tree.order],
            {str(v): lv for v, lv in d.subdivided.level.items()},
            GraphDocument.from_graph(d.h, {"role": "even subdivision"}).to_dict(),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": self.FORMAT,
            "version": VERSION,
            "root": self.root,
            "first": self.first,
            "offset": self.offset,
            "plan": self.plan,
            "paths": self.paths,
            "order": self.order,
            "level": self.level,
            "h": self.h,
        }

    def dumps(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: Dict[str, Any]) -> "DecompositionDocument":
        _expect(obj, cls.FORMAT)
        try:
            return cls(str(obj["root"]), obj.get("first"), int(obj["offset"]), list(obj["plan"]),
                       [list(p) for p in obj["paths"]], list(obj["order"]), dict(obj["level"]), dict(obj["h"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed decomposition document: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> "DecompositionDocument":
        return cls.from_dict(_load_json(text))

    def h_graph(self) -> GraphDocument:
        return GraphDocument.from_dict(self.h)


def load_expected_graph(text: str) -> GraphDocument:
    """A graph document, or the ``h`` graph inside a decomposition document."""
    obj = _load_json(text)
    if obj.get("format") == DecompositionDocument.FORMAT:
        return DecompositionDocument.from_dict(obj).h_graph()
    return GraphDocument.from_dict(obj)
