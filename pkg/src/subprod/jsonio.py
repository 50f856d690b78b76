"""JSON encodings of complex matrices, tuples, CP maps and system specs.

Matrix format: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major
order. Plain nested lists of numbers or [re, im] pairs are accepted on input.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .kernel import InvalidInput, as_cmatrix


def encode_complex(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _decode_scalar(v) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise InvalidInput(f"cannot read {v!r} as a complex number")


def encode_matrix(m) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [encode_complex(z) for z in m.reshape(-1)],
    }


def decode_matrix(obj) -> np.ndarray:
    if isinstance(obj, dict):
        try:
            rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"matrix object needs rows, cols and data: {exc}") from None
        if len(data) != rows * cols:
            raise InvalidInput(f"matrix data has {len(data)} entries, expected {rows * cols}")
        vals = np.array([_decode_scalar(v) for v in data], dtype=complex)
        return as_cmatrix(vals.reshape(rows, cols))
    if isinstance(obj, list) and obj and all(isinstance(r, list) for r in obj):
        rows = [[_decode_scalar(v) for v in r] for r in obj]
        if len({len(r) for r in rows}) != 1:
            raise InvalidInput("ragged matrix rows")
        return as_cmatrix(np.array(rows, dtype=complex))
    raise InvalidInput("expected a matrix object or a nested list")


def load_json(source: str):
    """Parse ``source`` as inline JSON if it looks like JSON, else read it as a file."""
    text = source.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise InvalidInput(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def decode_rep(obj):
    from .reps import RepTuple

    if not isinstance(obj, dict) or "matrices" not in obj:
        raise InvalidInput("representation JSON needs a 'matrices' list")
    T = RepTuple(tuple(decode_matrix(m) for m in obj["matrices"]))
    if "d" in obj and int(obj["d"]) != T.d:
        raise InvalidInput(f"declared d = {obj['d']} but {T.d} matrices given")
    if "k" in obj and int(obj["k"]) != T.k:
        raise InvalidInput(f"declared k = {obj['k']} but matrices are {T.k} x {T.k}")
    return T


def encode_rep(T) -> dict:
    return {"d": T.d, "k": T.k, "matrices": [encode_matrix(m) for m in T.matrices]}


def decode_cp(obj):
    from .cpsg import CPMap

    if not isinstance(obj, dict):
        raise InvalidInput("CP map JSON must be an object")
    if "choi" in obj:
        C = decode_matrix(obj["choi"])
        k = int(obj.get("k", round(np.sqrt(C.shape[0]))))
        return CPMap(k, C)
    if "kraus" in obj:
        mats = [decode_matrix(m) for m in obj["kraus"]]
        return CPMap.from_kraus(mats, obj.get("k"))
    raise InvalidInput("CP map JSON needs 'choi' or 'kraus'")
