"""JSON interchange for dual matrices.

A matrix file looks like::

    {"rows": 2, "cols": 2,
     "standard":      [[[1, 0], [0, 0]], [[0, 0], [2, 0]]],
     "infinitesimal": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}

Each entry is a ``[re, im]`` pair; a bare number is accepted as a real
entry.  Floats are written with Python's shortest round-trip repr, so
``load(dump(A))`` reproduces ``A`` bit for bit.
"""

from __future__ import annotations

import json
import math
import numbers
from pathlib import Path

import numpy as np

from .dmatrix import DualMatrix
from .dualnum import DualComplex, DualReal
from .errors import ParseError


def _entry(x) -> list[float]:
    return [float(x.real), float(x.imag)]


def _part_to_json(a: np.ndarray) -> list:
    return [[_entry(x) for x in row] for row in a]


def matrix_to_json(A: DualMatrix) -> dict:
    for part in (A.S, A.D):
        if not np.all(np.isfinite(part)):
            raise ValueError("cannot serialize non-finite entries")
    m, n = A.shape
    return {"rows": m, "cols": n, "standard": _part_to_json(A.S), "infinitesimal": _part_to_json(A.D)}


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    v = float(x)
    if not math.isfinite(v):
        raise ParseError(f"{where}: non-finite value {x!r}")
    return v


def _parse_entry(x, where: str) -> complex:
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError(f"{where}: complex entries are [re, im] pairs, got {x!r}")
        return complex(_number(x[0], where), _number(x[1], where))
    return complex(_number(x, where), 0.0)


def _parse_part(obj, name: str, m: int, n: int) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != m:
        raise ParseError(f"'{name}' must be a list of {m} rows")
    out = np.zeros((m, n), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"'{name}' row {i} must have {n} entries")
        for j, x in enumerate(row):
            out[i, j] = _parse_entry(x, f"{name}[{i}][{j}]")
    return out


def matrix_from_json(obj) -> DualMatrix:
    if not isinstance(obj, dict):
        raise ParseError("matrix file must hold a JSON object")
    missing = {"rows", "cols", "standard"} - obj.keys()
    if missing:
        raise ParseError(f"matrix file is missing {sorted(missing)}")
    m, n = obj["rows"], obj["cols"]
    for key, v in (("rows", m), ("cols", n)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise ParseError(f"'{key}' must be a non-negative integer, got {v!r}")
    S = _parse_part(obj["standard"], "standard", m, n)
    D = _parse_part(obj["infinitesimal"], "infinitesimal", m, n) if "infinitesimal" in obj else np.zeros((m, n), complex)
    return DualMatrix(S, D)


def loads(text: str) -> DualMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return matrix_from_json(obj)


def dumps(A: DualMatrix) -> str:
    return json.dumps(matrix_to_json(A), sort_keys=True)


def load_matrix(path) -> DualMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return loads(text)


def save_matrix(A: DualMatrix, path) -> None:
    Path(path).write_text(dumps(A) + "\n")


def scalar_to_json(x) -> list[float]:
    """``[re_s, im_s, re_d, im_d]`` for dual real and dual complex scalars alike."""
    if not isinstance(x, (DualReal, DualComplex)):
        x = DualComplex.coerce(x)
    return [float(v) for v in x.to_list()]


def complex_to_json(a: np.ndarray) -> list:
    return _part_to_json(np.asarray(a, dtype=complex))


def load_fixture(name: str) -> DualMatrix:
    """Load a bundled example matrix, e.g. ``load_fixture("example_3_1")``."""
    from importlib.resources import files

    fname = name if name.endswith(".json") else f"{name}.json"
    return loads(files("dualmat").joinpath("fixtures", fname).read_text())
