"""State and report files.

Both are UTF-8 JSON documents carrying a ``schema`` string.  Every float is
written with 17 significant digits, so files re-parse to the exact same
doubles and repeated saves are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from hartree.state import HartreeError, StateTensor

STATE_SCHEMA = "hartree-state/1"
REPORT_SCHEMA = "hartree-report/1"


class StateFileError(HartreeError):
    """A state file could not be parsed or failed validation."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} cannot be written")
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with 17-significant-digit floats.

    Short lists of scalars are kept on one line.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj) and len(obj) <= 8:
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def complex_pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def state_digest(t: StateTensor) -> str:
    """SHA-256 over the dims and the little-endian complex128 amplitudes."""
    h = hashlib.sha256()
    h.update(",".join(map(str, t.dims.dims)).encode())
    h.update(np.ascontiguousarray(t.amplitudes, dtype="<c16").tobytes())
    return "sha256:" + h.hexdigest()


def state_to_text(t: StateTensor) -> str:
    doc = {
        "schema": STATE_SCHEMA,
        "dims": list(t.dims.dims),
        "amplitudes": complex_pairs(t.amplitudes),
    }
    return dumps(doc) + "\n"


def save_state(t: StateTensor, path) -> None:
    Path(path).write_text(state_to_text(t), encoding="utf-8")


def _pair(v, where) -> complex:
    if (
        not isinstance(v, list)
        or len(v) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
    ):
        raise StateFileError(f"{where}: expected [re, im] pair, got {v!r}")
    z = complex(v[0], v[1])
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise StateFileError(f"{where}: non-finite amplitude")
    return z


def _reject_constant(name):
    raise StateFileError(f"non-finite number {name} in state file")


def state_from_text(text: str) -> StateTensor:
    """Parse a state document.

    Besides the dense ``amplitudes`` list, a ``sparse`` list of
    ``[[i1, ..., in], [re, im]]`` entries is accepted and densified.
    """
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFileError("state file must be a JSON object")
    schema = doc.get("schema", STATE_SCHEMA)
    if schema != STATE_SCHEMA:
        raise StateFileError(f"unsupported schema {schema!r}")
    dims = doc.get("dims")
    if (
        not isinstance(dims, list)
        or not dims
        or not all(isinstance(d, int) and not isinstance(d, bool) for d in dims)
    ):
        raise StateFileError("'dims' must be a list of integers")
    try:
        size = math.prod(dims)
        if "amplitudes" in doc:
            raw = doc["amplitudes"]
            if not isinstance(raw, list):
                raise StateFileError("'amplitudes' must be a list")
            if len(raw) != size:
                raise StateFileError(f"expected {size} amplitudes for dims {dims}, got {len(raw)}")
            amps = np.array([_pair(v, f"amplitude {i}") for i, v in enumerate(raw)], dtype=complex)
        elif "sparse" in doc:
            amps = np.zeros(dims, dtype=complex) if all(d > 0 for d in dims) else None
            if amps is None:
                raise StateFileError("dims must be positive")
            for i, entry in enumerate(doc["sparse"]):
                if not isinstance(entry, list) or len(entry) != 2:
                    raise StateFileError(f"sparse entry {i}: expected [index, [re, im]]")
                idx, val = entry
                if (
                    not isinstance(idx, list)
                    or len(idx) != len(dims)
                    or not all(isinstance(j, int) and 0 <= j < d for j, d in zip(idx, dims))
                ):
                    raise StateFileError(f"sparse entry {i}: bad index {idx!r}")
                amps[tuple(idx)] += _pair(val, f"sparse entry {i}")
        else:
            raise StateFileError("state file needs 'amplitudes' or 'sparse'")
        return StateTensor(dims, amps)
    except StateFileError:
        raise
    except HartreeError as exc:
        raise StateFileError(str(exc)) from exc


def load_state(path) -> StateTensor:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    return state_from_text(text)
