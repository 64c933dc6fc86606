"""JSON document formats: spaces, digital curves, point maps, circuits.

All numeric content is exact: integers or "p/q" strings. Set-valued
outputs are sorted id lists. Documents round-trip bit-exactly through
canonical JSON (sorted keys, no whitespace), which is also what digests
are computed over.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Union

from .digital import DigitalCurve
from .homotopy import Circuit, make_circuit
from .npp import PointMap
from .spaces import DocumentFormatError, MetricSpace

DocRef = Union[dict, str, Path]


def load_document(ref: DocRef) -> dict:
    if isinstance(ref, dict):
        return ref
    path = Path(ref)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise DocumentFormatError(f"no such document: {path}")
    except json.JSONDecodeError as e:
        raise DocumentFormatError(f"malformed JSON in {path}: {e}")
    if not isinstance(doc, dict):
        raise DocumentFormatError(f"document root must be an object: {path}")
    return doc


def load_space(ref: DocRef) -> MetricSpace:
    doc = load_document(ref)
    kind = doc.get("kind")
    window = doc.get("window")
    if kind == "points":
        metric = doc.get("metric", "euclidean")
        pts = doc.get("points")
        if not isinstance(pts, list) or not pts:
            raise DocumentFormatError("points document needs a non-empty 'points' list")
        return MetricSpace.from_points(pts, metric=metric, window=window)
    if kind == "matrix":
        rows = doc.get("d")
        if not isinstance(rows, list):
            raise DocumentFormatError("matrix document needs 'd'")
        space = MetricSpace.from_matrix(rows)
        if window is not None:
            space.window = MetricSpace._resolve_window(space, window)
        return space
    if kind == "graph":
        if "n" not in doc or "edges" not in doc:
            raise DocumentFormatError("graph document needs 'n' and 'edges'")
        return MetricSpace.from_graph(doc["n"], doc["edges"], window=window)
    raise DocumentFormatError(f"unknown space kind {kind!r}")


def save_space(space: MetricSpace) -> dict:
    return space.document()


def load_curve(ref: DocRef) -> DigitalCurve:
    doc = load_document(ref)
    if doc.get("kind") != "digital_curve":
        raise DocumentFormatError("curve document needs kind 'digital_curve'")
    pts = doc.get("points")
    if not isinstance(pts, list) or not pts:
        raise DocumentFormatError("curve document needs a non-empty 'points' list")
    return DigitalCurve(tuple((int(p[0]), int(p[1])) for p in pts))


def save_curve(curve: DigitalCurve) -> dict:
    return {"kind": "digital_curve", "points": [list(p) for p in curve.points]}


def _resolve_ref(ref, base: Path | None):
    if isinstance(ref, dict):
        return ref
    if isinstance(ref, str):
        p = Path(ref)
        if base is not None and not p.is_absolute():
            p = base / p
        return load_document(p)
    raise DocumentFormatError(f"bad reference {ref!r}")


def load_map(ref: DocRef, base: Path | None = None) -> PointMap:
    doc = load_document(ref)
    if "domain" not in doc or "codomain" not in doc or "table" not in doc:
        raise DocumentFormatError("map document needs 'domain', 'codomain', 'table'")
    dom = load_space(_resolve_ref(doc["domain"], base))
    cod = load_space(_resolve_ref(doc["codomain"], base))
    return PointMap(dom, cod, tuple(int(v) for v in doc["table"]))


def load_circuit(ref: DocRef, base: Path | None = None):
    doc = load_document(ref)
    if "space" not in doc or "points" not in doc:
        raise DocumentFormatError("circuit document needs 'space' and 'points'")
    space = load_space(_resolve_ref(doc["space"], base))
    circ = make_circuit(space, [int(v) for v in doc["points"]])
    if "base" in doc and int(doc["base"]) != circ.base:
        raise DocumentFormatError("circuit 'base' does not match its endpoints")
    return space, circ


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest_document(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def atomic_write_text(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent) or ".", prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
