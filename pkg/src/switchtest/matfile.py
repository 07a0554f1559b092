"""Matrix file format and atomic output writing.

A unitary on disk is a JSON object {"dim": d, "matrix": rows} where each
entry is a [re, im] pair; row-major, d x d.  Output files are written
through a temporary file in the target directory and renamed into
place, so a crashed run never leaves a half-written result behind.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import BadParameter
from .qmath import UnitaryOp


def matrix_to_obj(m: np.ndarray) -> dict:
    d = m.shape[0]
    rows = [[[float(m[r, c].real), float(m[r, c].imag)] for c in range(d)] for r in range(d)]
    return {"dim": d, "matrix": rows}


def matrix_from_obj(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "dim" not in obj or "matrix" not in obj:
        raise BadParameter("matrix file must be an object with 'dim' and 'matrix'")
    d = obj["dim"]
    if not isinstance(d, int) or d < 1:
        raise BadParameter(f"bad matrix dimension {d!r}")
    rows = obj["matrix"]
    try:
        m = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise BadParameter("matrix entries must be [re, im] pairs") from exc
    if m.shape != (d, d):
        raise BadParameter(f"matrix shape {m.shape} does not match dim {d}")
    return m


def save_unitary(path: str, u: UnitaryOp) -> None:
    atomic_write_text(path, json.dumps(matrix_to_obj(u.matrix), indent=2) + "\n")


def load_unitary(path: str) -> UnitaryOp:
    """Read and validate a unitary; UnitaryOp construction enforces unitarity."""
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BadParameter(f"{path}: not valid JSON: {exc}") from exc
    return UnitaryOp(matrix_from_obj(obj))


def atomic_write_text(path: str, text: str) -> None:
    """Write text to path via tempfile + rename in the same directory."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
