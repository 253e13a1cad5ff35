"""JSON artifacts wrapped in a {"kind", "version", "payload"} envelope.

Dense matrices are {"rows", "cols", "data": [[re, im], ...]} in row-major
order.  Floats are written with Python's shortest round-trip repr, so a
read-back is bit-identical.  Monomial matrices are stored exactly as
{"n", "order", "perm", "exps"}.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .classes import ClassPartition, CommutingClass
from .errorbases import UnitaryErrorBasis
from .errors import InputError
from .fields import AbelianGroupSpec, LatinSquare, ParallelClass
from .lie import CartanSubalgebra, OrthogonalDecomposition
from .monomial import MonomialMatrix
from .mub import MubCollection

VERSION = 1
KINDS = (
    "matrix",
    "monomial",
    "error-basis",
    "partition",
    "mubs",
    "cartan",
    "od",
    "latin-squares",
    "parallel-classes",
    "hadamard",
)


class FormatError(InputError):
    """Artifact file is malformed or of the wrong kind."""


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    data = [[float(z.real), float(z.imag)] for z in M.reshape(-1)]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]), "data": data}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        arr = np.asarray(obj["data"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad matrix object: {exc}") from None
    if arr.shape != (rows * cols, 2):
        raise FormatError(f"matrix data has shape {arr.shape}, expected ({rows * cols}, 2)")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(rows, cols)


def any_matrix_to_json(M) -> dict:
    if isinstance(M, MonomialMatrix):
        return M.to_json()
    return matrix_to_json(M)


def any_matrix_from_json(obj: dict):
    if "perm" in obj:
        try:
            return MonomialMatrix.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad monomial object: {exc}") from None
    return matrix_from_json(obj)


def to_payload(obj) -> tuple[str, object]:
    """(kind, JSON-ready payload) for a library object."""
    if isinstance(obj, MonomialMatrix):
        return "monomial", obj.to_json()
    if isinstance(obj, np.ndarray):
        return "matrix", matrix_to_json(obj)
    if isinstance(obj, UnitaryErrorBasis):
        labels = obj.labels or [None] * len(obj.elements)
        return "error-basis", {
            "n": obj.n,
            "index_group": list(obj.index_group.factors) if obj.index_group else None,
            "elements": [
                {"label": None if g is None else list(g), "matrix": any_matrix_to_json(U)}
                for g, U in zip(labels, obj.elements)
            ],
        }
    if isinstance(obj, ClassPartition):
        payload = {"n": obj.n, "classes": [[any_matrix_to_json(U) for U in C.members] for C in obj.classes]}
        if all(C.labels is not None for C in obj.classes):
            payload["labels"] = [[list(g) for g in C.labels] for C in obj.classes]
        return "partition", payload
    if isinstance(obj, MubCollection):
        return "mubs", {"n": obj.n, "bases": [matrix_to_json(B) for B in obj.bases], "provenance": obj.provenance}
    if isinstance(obj, CartanSubalgebra):
        return "cartan", {"n": obj.n, "basis": [any_matrix_to_json(h) for h in obj.basis]}
    if isinstance(obj, OrthogonalDecomposition):
        return "od", {"n": obj.n, "cartans": [[any_matrix_to_json(h) for h in C.basis] for C in obj.cartans]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_payload(kind: str, payload):
    try:
        if kind == "matrix":
            return matrix_from_json(payload)
        if kind == "hadamard":
            return matrix_from_json(payload)
        if kind == "monomial":
            return any_matrix_from_json(payload)
        if kind == "error-basis":
            n = int(payload["n"])
            group = payload.get("index_group")
            elems = [any_matrix_from_json(e["matrix"]) for e in payload["elements"]]
            labels = [e.get("label") for e in payload["elements"]]
            if group is None or any(g is None for g in labels):
                return UnitaryErrorBasis(n, elems)
            return UnitaryErrorBasis(n, elems, [tuple(g) for g in labels], AbelianGroupSpec(tuple(group)))
        if kind == "partition":
            n = int(payload["n"])
            labels = payload.get("labels")
            classes = []
            for k, members in enumerate(payload["classes"]):
                lab = labels[k] if labels is not None else None
                classes.append(CommutingClass(n, [any_matrix_from_json(U) for U in members], lab))
            return ClassPartition(n, classes)
        if kind == "mubs":
            return MubCollection(
                int(payload["n"]),
                [matrix_from_json(B) for B in payload["bases"]],
                payload.get("provenance", "imported"),
            )
        if kind == "cartan":
            return CartanSubalgebra(int(payload["n"]), [any_matrix_from_json(h) for h in payload["basis"]])
        if kind == "od":
            n = int(payload["n"])
            return OrthogonalDecomposition(
                n, [CartanSubalgebra(n, [any_matrix_from_json(h) for h in C]) for C in payload["cartans"]]
            )
        if kind == "latin-squares":
            return [LatinSquare.from_rows(rows) for rows in payload]
        if kind == "parallel-classes":
            return [ParallelClass(len(blocks), [tuple(b) for b in blocks]) for blocks in payload]
    except FormatError:
        raise
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"malformed {kind} payload: {exc}") from None
    raise FormatError(f"unknown artifact kind {kind!r}")


def dumps(kind: str, payload) -> str:
    return json.dumps({"kind": kind, "version": VERSION, "payload": payload}, separators=(",", ":")) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the mode a plain open() would
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save(path: str | os.PathLike, obj, kind: str | None = None) -> None:
    """Serialize a library object (or a raw payload when ``kind`` is given)."""
    if kind is None:
        kind, payload = to_payload(obj)
    else:
        payload = obj
    write_atomic(path, dumps(kind, payload))


def loads(text: str, expect: str | None = None):
    """Parse an envelope; returns (kind, object)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not {"kind", "version", "payload"} <= doc.keys():
        raise FormatError("missing artifact envelope")
    if doc["version"] != VERSION:
        raise FormatError(f"unsupported version {doc['version']!r}")
    kind = doc["kind"]
    if expect is not None and kind != expect:
        raise FormatError(f"expected a {expect!r} artifact, got {kind!r}")
    return kind, from_payload(kind, doc["payload"])


def load(path: str | os.PathLike, expect: str | None = None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    return loads(text, expect)
