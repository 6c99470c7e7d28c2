"""Matrix and table serialization.

Covariance matrices are stored as JSON::

    {"n_modes": 3, "ordering": "xpxp", "data": [[...], ...]}

(full matrix, row-major). A whitespace-delimited plain-text form is also
accepted for shell pipelines; files are told apart by their first
non-blank character.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch
from .symplectic import covariance, n_modes

ORDERING = "xpxp"


def matrix_to_json(gamma) -> dict:
    g = covariance(gamma)
    return {"n_modes": n_modes(g), "ordering": ORDERING, "data": g.tolist()}


def matrix_from_json(doc: dict) -> np.ndarray:
    if doc.get("ordering", ORDERING) != ORDERING:
        raise DimensionMismatch(f"unsupported quadrature ordering {doc['ordering']!r}")
    g = covariance(doc["data"])
    if "n_modes" in doc and int(doc["n_modes"]) != n_modes(g):
        raise DimensionMismatch(f"n_modes={doc['n_modes']} but data is {g.shape[0]}x{g.shape[1]}")
    return g


def matrix_to_text(gamma) -> str:
    buf = io.StringIO()
    np.savetxt(buf, covariance(gamma), fmt="%.17g")
    return buf.getvalue()


def matrix_from_text(text: str) -> np.ndarray:
    return covariance(np.loadtxt(io.StringIO(text), ndmin=2))


def parse_matrix(text: str) -> np.ndarray:
    if text.lstrip().startswith("{"):
        return matrix_from_json(json.loads(text))
    return matrix_from_text(text)


def load_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def save_matrix(path, gamma) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(matrix_to_json(gamma), indent=2) + "\n")
    else:
        path.write_text(matrix_to_text(gamma))


def write_csv(path, header, rows) -> None:
    """Write a table; floats use ``repr`` so reruns are byte-identical."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def write_json(path, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
