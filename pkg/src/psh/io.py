"""Matrix and trajectory file formats.

Matrix files are JSON documents::

    {"dim": 2, "entries": [[[0, 0], [1, 0]], [[4, 0], [0, 0]]], "label": "H"}

with every complex number stored as a ``[re, im]`` pair, row major.  A
vector uses ``dim x 1`` rows (``[[[re, im]], ...]``); a flat list of pairs
is accepted on input.  Trajectory files are CSV with the header
``t,speed,arc_length,fidelity_to_final``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import PshError
from .evolution import Trajectory

TRAJECTORY_HEADER = ("t", "speed", "arc_length", "fidelity_to_final")


class FormatError(PshError, ValueError):
    """A file does not follow the expected format."""


def _pair(x, where: str) -> complex:
    if not (isinstance(x, (list, tuple)) and len(x) == 2):
        raise FormatError(f"{where}: expected a [re, im] pair, got {x!r}")
    try:
        re, im = float(x[0]), float(x[1])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: non-numeric entry {x!r}") from exc
    if not (math.isfinite(re) and math.isfinite(im)):
        raise FormatError(f"{where}: non-finite entry {x!r}")
    return complex(re, im)


def matrix_to_doc(m, label: str | None = None) -> dict:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    doc = {
        "dim": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }
    if label is not None:
        doc["label"] = label
    return doc


def matrix_from_doc(doc) -> np.ndarray:
    """Parse a matrix document; vectors come back with shape ``(dim, 1)``."""
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise FormatError("matrix document needs 'dim' and 'entries'")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FormatError(f"'dim' must be a positive integer, got {dim!r}")
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != dim:
        raise FormatError(f"'entries' must have {dim} rows")
    if all(isinstance(r, list) and len(r) == 2 and not isinstance(r[0], list) for r in rows):
        # flat vector of pairs
        return np.array([[_pair(r, f"entry {i}")] for i, r in enumerate(rows)], dtype=complex)
    width = len(rows[0]) if isinstance(rows[0], list) else -1
    if width not in (1, dim):
        raise FormatError(f"rows must have length {dim} (matrix) or 1 (vector)")
    out = np.empty((dim, width), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise FormatError(f"row {i} has the wrong length")
        for j, x in enumerate(row):
            out[i, j] = _pair(x, f"entry ({i}, {j})")
    return out


def read_matrix(path) -> np.ndarray:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return matrix_from_doc(doc)


def read_vector(path) -> np.ndarray:
    m = read_matrix(path)
    if m.shape[1] != 1:
        raise FormatError(f"{path}: expected a vector (dim x 1), got shape {m.shape}")
    return m[:, 0]


def write_matrix(path, m, label: str | None = None) -> None:
    Path(path).write_text(json.dumps(matrix_to_doc(m, label)) + "\n")


def _fixed(x: float, digits: int = 12) -> str:
    """Positional notation with ``digits`` significant digits."""
    x = float(x)
    if x == 0.0:
        return f"{0.0:.{digits - 1}f}"
    exponent = math.floor(math.log10(abs(float(f"{x:.{digits - 1}e}"))))
    return f"{x:.{max(digits - 1 - exponent, 0)}f}"


def write_trajectory(path, traj: Trajectory) -> None:
    fid = traj.fidelity_to_final()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRAJECTORY_HEADER)
        for row in zip(traj.times, traj.speeds, traj.arc_lengths, fid):
            w.writerow([_fixed(v) for v in row])


def read_trajectory(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRAJECTORY_HEADER:
        raise FormatError(f"{path}: bad trajectory header")
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return {name: data[:, k] for k, name in enumerate(TRAJECTORY_HEADER)}
