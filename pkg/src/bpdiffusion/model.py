"""Models, JSON documents and seeded initial conditions."""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .fields import Context, Field0
from .nerve import Nerve, canonical_face, face_key, intersection_closure, parse_face_key

LAYOUT = "row-major-sorted-vertices"

HORN2_FACES = [(0, 1, 2), (0, 2, 3), (1, 2, 3)]


@dataclass
class Model:
    """Variable cardinalities, a closed nerve and the potential h in A_0."""

    context: Context
    potential: Field0
    closure_performed: bool = True

    @property
    def nerve(self) -> Nerve:
        return self.context.nerve


class DocumentError(ValueError):
    pass


def _tensor_doc(t: np.ndarray) -> dict:
    return {"shape": list(t.shape), "data": [float(x) for x in t.ravel()], "layout": LAYOUT}


def _tensor_from_doc(doc: dict, key: str) -> np.ndarray:
    try:
        shape = [int(n) for n in doc["shape"]]
        data = np.asarray(doc["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed tensor at {key!r}: {e}") from None
    if doc.get("layout", LAYOUT) != LAYOUT:
        raise DocumentError(f"unsupported layout {doc.get('layout')!r} at {key!r}")
    if data.size != int(np.prod(shape)):
        raise DocumentError(f"tensor at {key!r}: {data.size} values for shape {shape}")
    if not np.all(np.isfinite(data)):
        raise DocumentError(f"non-finite values at {key!r}")
    return data.reshape(shape)


def load_model(document: dict[str, Any], closure: bool = True) -> Model:
    """Build a model from a JSON-like document; missing potentials are zero."""
    try:
        variables = {int(k): int(v) for k, v in document["variables"].items()}
        raw_faces = document["faces"]
    except (KeyError, AttributeError, TypeError, ValueError) as e:
        raise DocumentError(f"malformed model document: {e}") from None
    faces = []
    for f in raw_faces:
        try:
            face = canonical_face(f)
        except (TypeError, ValueError) as e:
            raise DocumentError(f"bad face {f!r}: {e}") from None
        unknown = [v for v in face if v not in variables]
        if unknown:
            raise DocumentError(f"unknown vertex {unknown[0]} in face {list(face)}")
        faces.append(face)
    if len(set(faces)) != len(faces):
        raise DocumentError("duplicate faces")
    if not faces:
        raise DocumentError("empty hypergraph")
    try:
        nerve = intersection_closure(faces) if closure else Nerve.from_faces(faces)
        ctx = Context(nerve, {v: variables[v] for v in nerve.vertices})
    except ValueError as e:
        raise DocumentError(str(e)) from None

    data = {a: np.zeros(ctx.face_shape(a)) for a in nerve}
    for key, tdoc in (document.get("potentials") or {}).items():
        try:
            face = parse_face_key(key)
        except ValueError:
            raise DocumentError(f"bad face key {key!r}") from None
        if face not in nerve:
            raise DocumentError(f"potential on {key!r}, which is not a face")
        t = _tensor_from_doc(tdoc, key)
        if t.shape != ctx.face_shape(face):
            raise DocumentError(f"tensor at {key!r} has shape {list(t.shape)}, expected {list(ctx.face_shape(face))}")
        data[face] = t
    return Model(ctx, Field0(ctx, data), closure_performed=closure)


def save_model(model: Model) -> dict[str, Any]:
    ctx = model.context
    return {
        "variables": {str(v): int(ctx.cardinalities[v]) for v in ctx.nerve.vertices},
        "faces": [list(a) for a in ctx.nerve],
        "potentials": {face_key(a): _tensor_doc(model.potential[a]) for a in ctx.nerve},
        "closure_performed": model.closure_performed,
    }


def beliefs_document(q: Field0, **extra) -> dict[str, Any]:
    ctx = q.context
    doc = {
        "variables": {str(v): int(ctx.cardinalities[v]) for v in ctx.nerve.vertices},
        "faces": [list(a) for a in ctx.nerve],
        "beliefs": {face_key(a): _tensor_doc(q[a]) for a in ctx.nerve},
    }
    doc.update(extra)
    return doc


def load_beliefs(document: dict[str, Any], ctx: Context) -> Field0:
    try:
        entries = document["beliefs"]
    except (KeyError, TypeError):
        raise DocumentError("beliefs document has no 'beliefs' entry") from None
    data = {}
    for key, tdoc in entries.items():
        face = parse_face_key(key)
        if face not in ctx.nerve:
            raise DocumentError(f"belief on {key!r}, which is not a face of the model")
        data[face] = _tensor_from_doc(tdoc, key)
    missing = [face_key(a) for a in ctx.nerve if a not in data]
    if missing:
        raise DocumentError(f"missing beliefs for faces {missing}")
    try:
        return Field0(ctx, data)
    except ValueError as e:
        raise DocumentError(str(e)) from None


def read_json(path: str | Path) -> Any:
    with open(path) as fh:
        return json.load(fh)


def write_json(obj: Any, path: str | Path | None) -> str:
    text = json.dumps(obj, indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def horn2_context(cardinality: int = 2) -> Context:
    nerve = intersection_closure(HORN2_FACES)
    return Context(nerve, {v: cardinality for v in nerve.vertices})


def _substream(seed: int, face: tuple[int, ...], temperature: float) -> np.random.Generator:
    t_bits = struct.unpack("<Q", struct.pack("<d", float(temperature)))[0]
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(t_bits, len(face), *face))
    return np.random.Generator(np.random.PCG64(ss))


def sample_initial(ctx: Context, temperature: float, seed: int) -> Field0:
    """Potentials with independent entries (1/T) N(0, 1), one substream per face."""
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return Field0(
        ctx,
        {a: _substream(seed, a, temperature).standard_normal(ctx.face_shape(a)) / temperature for a in ctx.nerve},
    )
