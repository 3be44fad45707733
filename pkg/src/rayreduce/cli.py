"""``rayreduce`` command line: gen, reduce, verify, render.

Exit codes: 0 success, 1 verification failed, 2 bad input, 3 precision cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .certify import PrecisionCapExceeded, certified_reduce, verify_against
from .decompose import AdmissibilityFailed, NoEquidistantSubpath
from .documents import (
    CertificateDocument,
    DecompositionDocument,
    DocumentError,
    GraphDocument,
    RayDocument,
    dumps,
    load_expected_graph,
    sha256_file,
)
from .generators import UnknownFamily, generate
from .planar import EmbeddingError
from .render import render_svg

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}, sort_keys=True), file=sys.stderr)
    return code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _stem(path: str) -> str:
    name = Path(path).name
    for suffix in (".graph.json", ".json"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def cmd_gen(args) -> int:
    doc = generate(args.family, args.size, seed=args.seed)
    text = dumps(doc)
    if args.output:
        _write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = GraphDocument.loads(_read(args.input)).to_graph()
    out = Path(args.out_dir)
    stem = _stem(args.input)
    inputs = {"graph": sha256_file(args.input)}
    try:
        red = certified_reduce(g, start_bits=args.precision_start, cap_constant=args.bit_cap_constant)
    except PrecisionCapExceeded as exc:
        if exc.certificate is not None:
            doc = CertificateDocument.from_certificate(exc.certificate, inputs, timing=args.timing)
            _write(out / f"{stem}.cert.json", doc.dumps())
        return _error("PrecisionCapExceeded", str(exc), EXIT_CAP)
    rays = RayDocument.from_reduction(red)
    paths = {
        "rays": out / f"{stem}.rays.json",
        "certificate": out / f"{stem}.cert.json",
        "decomposition": out / f"{stem}.decomp.json",
    }
    _write(paths["rays"], rays.dumps())
    _write(paths["decomposition"], DecompositionDocument.from_decomposition(red.decomposition).dumps())
    inputs["rays"] = sha256_file(paths["rays"])
    cert = CertificateDocument.from_certificate(red.certificate, inputs, timing=args.timing)
    _write(paths["certificate"], cert.dumps())
    c = red.certificate
    summary = {
        "passed": c.passed,
        "rays": len(rays.rays),
        "offset": red.offset,
        "scale_bits": c.scale_bits,
        "retries": c.retries,
        "max_coordinate_bits": c.max_coordinate_bits,
        "k": rays.k,
        "outputs": {k: str(v) for k, v in paths.items()},
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK if c.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    rays = RayDocument.loads(_read(args.rays))
    h = load_expected_graph(_read(args.expected)).to_graph()
    ss = rays.to_snapped()
    try:
        c = verify_against(ss, h)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    inputs = {"rays": sha256_file(args.rays), "expected": sha256_file(args.expected)}
    doc = CertificateDocument.from_certificate(c, inputs, timing=args.timing)
    if args.output:
        _write(Path(args.output), doc.dumps())
    else:
        sys.stdout.write(doc.dumps())
    return EXIT_OK if c.passed else EXIT_FAIL


def cmd_render(args) -> int:
    k = args.frame
    rays = []
    B = 0
    if args.document:
        doc = RayDocument.loads(_read(args.document))
        kinds = {}
        if doc.scene:
            kinds = {v: r.get("kind") for v, r in doc.scene.get("rays", {}).items()}
        rays = [(e.vertex, e.to_ray(), kinds.get(e.vertex) == "LineThroughTwo") for e in doc.rays]
        B = doc.scale_bits
        if k is None and not args.no_frame:
            k = doc.k
    elif k is None:
        raise InputError("render needs a ray document or --frame K")
    svg = render_svg(k, rays, B, width=args.width, labels=not args.no_labels)
    _write(Path(args.output), svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rayreduce", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write an embedded graph from a named family")
    g.add_argument("family")
    g.add_argument("size", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce", help="build and certify the ray scene for a graph document")
    r.add_argument("input")
    r.add_argument("--out-dir", default=".")
    r.add_argument("--precision-start", type=int, default=256, help="initial lattice scale in bits")
    r.add_argument("--bit-cap-constant", type=int, default=50, help="C in the C*n^3 bit cap")
    r.add_argument("--seed-free", action="store_true", help="accepted for compatibility; runs are always deterministic")
    r.add_argument("--timing", action="store_true", help="record verification wall-clock in the certificate")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="re-check a ray document against an expected graph")
    v.add_argument("rays")
    v.add_argument("expected", help="graph document of H, or a decomposition document")
    v.add_argument("-o", "--output")
    v.add_argument("--timing", action="store_true")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("render", help="draw a frame and/or ray document as SVG")
    d.add_argument("document", nargs="?")
    d.add_argument("-o", "--output", required=True)
    d.add_argument("--frame", type=int, help="frame size k (defaults to the document's)")
    d.add_argument("--no-frame", action="store_true")
    d.add_argument("--width", type=int, default=800)
    d.add_argument("--no-labels", action="store_true")
    d.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DocumentError, EmbeddingError, UnknownFamily) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)
    except (AdmissibilityFailed, NoEquidistantSubpath) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)
    except ValueError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
