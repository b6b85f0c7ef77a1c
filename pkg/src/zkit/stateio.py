"""Shared JSON file formats for states and operators, plus a canonical
serializer: sorted keys, two-space indent, reals at 17 significant digits,
so reruns are bit-identical."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ParseError


def _format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite real {x} cannot be serialized")
    return "%.17g" % x


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {_emit(obj[k], indent + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        parts = [f"{inner}{_emit(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_canonical(obj) -> str:
    """Deterministic JSON text with a trailing newline."""
    return _emit(obj, 0) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_canonical(obj), encoding="utf-8")
    return path


def _complex_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values).ravel()]


def state_document(vector: np.ndarray, **metadata) -> dict:
    v = np.asarray(vector, dtype=complex)
    doc = {"dim": int(v.shape[0]), "amplitudes": _complex_pairs(v)}
    doc.update(metadata)
    return doc


def operator_document(matrix: np.ndarray, **metadata) -> dict:
    m = np.asarray(matrix, dtype=complex)
    doc = {"dim": int(m.shape[0]), "entries": _complex_pairs(m)}
    doc.update(metadata)
    return doc


def save_state(path, vector, **metadata) -> Path:
    return write_json(path, state_document(vector, **metadata))


def save_operator(path, matrix, **metadata) -> Path:
    return write_json(path, operator_document(matrix, **metadata))


def _load_doc(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    if not isinstance(doc, dict) or "dim" not in doc:
        raise ParseError(f"{path}: expected an object with a 'dim' key")
    return doc


def _parse_pairs(raw, count: int, path) -> np.ndarray:
    try:
        flat = np.array([complex(re, im) for re, im in raw])
    except (TypeError, ValueError) as err:
        raise ParseError(f"{path}: malformed [re, im] pair list") from err
    if flat.shape[0] != count:
        raise ParseError(f"{path}: expected {count} entries, got {flat.shape[0]}")
    return flat


def load_state(path, expected_dim: int | None = None) -> tuple[np.ndarray, dict]:
    """Read a state file; returns (amplitudes, full document)."""
    doc = _load_doc(path)
    dim = int(doc["dim"])
    if "amplitudes" not in doc:
        raise ParseError(f"{path}: missing 'amplitudes'")
    if expected_dim is not None and dim != expected_dim:
        raise DimensionMismatch(f"{path}: dim {dim}, expected {expected_dim}")
    return _parse_pairs(doc["amplitudes"], dim, path), doc


def load_operator(path, expected_dim: int | None = None) -> tuple[np.ndarray, dict]:
    doc = _load_doc(path)
    dim = int(doc["dim"])
    if "entries" not in doc:
        raise ParseError(f"{path}: missing 'entries'")
    if expected_dim is not None and dim != expected_dim:
        raise DimensionMismatch(f"{path}: dim {dim}, expected {expected_dim}")
    return _parse_pairs(doc["entries"], dim * dim, path).reshape(dim, dim), doc
