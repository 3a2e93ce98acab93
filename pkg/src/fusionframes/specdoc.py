"""Frame specification documents: parsing, validation, canonical output.

A document is a JSON object with a ``dimension``, an optional ``tolerance``
and a ``frames`` map from names to lists of items, each item holding the
``spanning_vectors`` of one subspace (possibly empty, for the zero
subspace) and its positive ``weight``.  Serialization is canonical: sorted
keys, 17-significant-digit floats, no whitespace surprises, so identical
documents produce identical bytes and a stable digest.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import SpecDocumentError
from .frames import FusionFrame
from .subspaces import orthonormalize
from .validation import DEFAULT_RANK_TOL, DEFAULT_TOL


@dataclass(frozen=True)
class FrameEntry:
    spanning_vectors: tuple[tuple[float, ...], ...]
    weight: float


@dataclass(frozen=True)
class FrameSpecDocument:
    dimension: int
    frames: dict[str, tuple[FrameEntry, ...]]
    tolerance: float = DEFAULT_TOL

    def frame_names(self) -> list[str]:
        return list(self.frames)


def _require_number(value, where: str, positive: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecDocumentError(f"{where} must be a number, got {type(value).__name__}")
    out = float(value)
    if not math.isfinite(out):
        raise SpecDocumentError(f"{where} must be finite")
    if positive and out <= 0:
        raise SpecDocumentError(f"{where} must be positive, got {out}")
    return out


def _parse_entry(raw, dimension: int, where: str) -> FrameEntry:
    if not isinstance(raw, dict):
        raise SpecDocumentError(f"{where} must be an object")
    unknown = set(raw) - {"spanning_vectors", "weight"}
    if unknown:
        raise SpecDocumentError(f"{where} has unknown fields {sorted(unknown)}")
    if "spanning_vectors" not in raw:
        raise SpecDocumentError(f"{where} is missing 'spanning_vectors'")
    if "weight" not in raw:
        raise SpecDocumentError(f"{where} is missing 'weight'")
    vecs = raw["spanning_vectors"]
    if not isinstance(vecs, list):
        raise SpecDocumentError(f"{where}.spanning_vectors must be a list")
    rows = []
    for j, vec in enumerate(vecs):
        if not isinstance(vec, list):
            raise SpecDocumentError(f"{where}.spanning_vectors[{j}] must be a list")
        if len(vec) != dimension:
            raise SpecDocumentError(
                f"{where}.spanning_vectors[{j}] has length {len(vec)}, "
                f"expected {dimension}")
        rows.append(tuple(_require_number(x, f"{where}.spanning_vectors[{j}][{k}]")
                          for k, x in enumerate(vec)))
    weight = _require_number(raw["weight"], f"{where}.weight", positive=True)
    return FrameEntry(spanning_vectors=tuple(rows), weight=weight)


def document_from_dict(data) -> FrameSpecDocument:
    if not isinstance(data, dict):
        raise SpecDocumentError("document root must be a JSON object")
    unknown = set(data) - {"dimension", "frames", "tolerance"}
    if unknown:
        raise SpecDocumentError(f"document has unknown fields {sorted(unknown)}")
    if "dimension" not in data:
        raise SpecDocumentError("document is missing 'dimension'")
    dim = data["dimension"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SpecDocumentError(f"dimension must be a positive integer, got {dim!r}")
    tolerance = DEFAULT_TOL
    if "tolerance" in data:
        tolerance = _require_number(data["tolerance"], "tolerance", positive=True)
    if "frames" not in data or not isinstance(data["frames"], dict):
        raise SpecDocumentError("document needs a 'frames' object")
    if not data["frames"]:
        raise SpecDocumentError("no frames defined in document")
    frames: dict[str, tuple[FrameEntry, ...]] = {}
    for name, items in data["frames"].items():
        if not isinstance(name, str) or not name:
            raise SpecDocumentError("frame names must be nonempty strings")
        if not isinstance(items, list) or not items:
            raise SpecDocumentError(f"frames[{name!r}] must be a nonempty list")
        frames[name] = tuple(
            _parse_entry(item, dim, f"frames[{name!r}][{i}]")
            for i, item in enumerate(items))
    return FrameSpecDocument(dimension=dim, frames=frames, tolerance=tolerance)


def parse_spec(source) -> FrameSpecDocument:
    """Parse a document from a dict, a JSON string, or a file path."""
    if isinstance(source, FrameSpecDocument):
        return source
    if isinstance(source, dict):
        return document_from_dict(source)
    if isinstance(source, Path):
        text = _read_file(source)
    elif isinstance(source, str):
        if source.lstrip().startswith("{"):
            text = source
        else:
            text = _read_file(Path(source))
    else:
        raise SpecDocumentError(f"cannot parse a {type(source).__name__} as a document")
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SpecDocumentError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return document_from_dict(data)


def _reject_duplicate_keys(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise SpecDocumentError(f"duplicate key {key!r} in document")
        out[key] = value
    return out


def _read_file(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise SpecDocumentError(f"cannot read spec file {path}: {exc}") from exc


def document_to_dict(doc: FrameSpecDocument) -> dict:
    return {
        "dimension": doc.dimension,
        "tolerance": doc.tolerance,
        "frames": {
            name: [
                {"spanning_vectors": [list(v) for v in entry.spanning_vectors],
                 "weight": entry.weight}
                for entry in entries
            ]
            for name, entries in doc.frames.items()
        },
    }


def serialize_spec(doc: FrameSpecDocument) -> str:
    return canonical_json(document_to_dict(doc))


def document_digest(doc: FrameSpecDocument) -> str:
    return hashlib.sha256(serialize_spec(doc).encode("utf-8")).hexdigest()


def build_frame(doc: FrameSpecDocument, name: str,
                rank_tol: float = DEFAULT_RANK_TOL) -> FusionFrame:
    """Construct the named fusion frame, in document order."""
    if name not in doc.frames:
        raise SpecDocumentError(
            f"no frame named {name!r}; available: {', '.join(doc.frames)}")
    subspaces = []
    weights = []
    for i, entry in enumerate(doc.frames[name]):
        try:
            subspaces.append(orthonormalize(
                [list(v) for v in entry.spanning_vectors],
                rank_tol=rank_tol, ambient_dim=doc.dimension))
        except Exception as exc:
            raise SpecDocumentError(f"frames[{name!r}][{i}]: {exc}") from exc
        weights.append(entry.weight)
    return FusionFrame(subspaces, weights)


def format_float(x: float) -> str:
    """17 significant digits: round-trip exact for doubles."""
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise TypeError(f"not a number: {x!r}")
    if not math.isfinite(x):
        raise ValueError("non-finite numbers cannot be serialized")
    return "%.17g" % float(x)


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, fixed float format, stable bytes."""
    pieces: list[str] = []
    _write_canonical(obj, pieces)
    return "".join(pieces)


def _write_canonical(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _write_canonical(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _write_canonical(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
