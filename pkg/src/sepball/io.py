"""JSON file formats.

Matrix file::

    {"dims": [rows, cols], "data": [[re, im], ...], "shape": [M, N], "label": "..."}

``data`` is row-major; ``shape`` and ``label`` are optional. Floats are
written with Python's shortest round-trip ``repr`` so that reading a file
back reproduces every entry bit for bit.
"""

from dataclasses import dataclass
import hashlib
import json
import math

import numpy as np

from .bipartite import BipartiteShape
from .exceptions import InvalidInputError, InvalidShapeError

REPORT_SCHEMA_VERSION = 1
DECOMPOSITION_SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class MatrixFile:
    matrix: np.ndarray
    shape: BipartiteShape = None
    label: str = None
    digest: str = None

    def to_dict(self):
        rows, cols = self.matrix.shape
        out = {
            "dims": [rows, cols],
            "data": [[float(z.real), float(z.imag)] for z in self.matrix.ravel()],
        }
        if self.shape is not None:
            out["shape"] = [self.shape.dim_left, self.shape.dim_right]
        if self.label is not None:
            out["label"] = self.label
        return out


def jsonable(obj):
    """Replace non-finite floats by strings so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj):
    return json.dumps(jsonable(obj), indent=2, allow_nan=False) + "\n"


def digest_bytes(raw):
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def parse_matrix_file(raw):
    """Parse matrix-file bytes; raises ``InvalidInputError`` on any defect."""
    try:
        doc = json.loads(raw.decode("utf-8") if isinstance(raw, bytes) else raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"not a JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInputError("matrix file must be a JSON object")
    try:
        rows, cols = (int(x) for x in doc["dims"])
        data = doc["data"]
    except (KeyError, TypeError, ValueError):
        raise InvalidInputError("matrix file needs 'dims': [rows, cols] and 'data'") from None
    if rows < 0 or cols < 0 or not isinstance(data, list) or len(data) != rows * cols:
        raise InvalidShapeError(f"'data' must hold {rows}x{cols} entries")
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
    except (TypeError, ValueError):
        raise InvalidInputError("each entry of 'data' must be a pair [re, im]") from None
    if not np.all(np.isfinite(flat)):
        raise InvalidInputError("matrix file contains non-finite entries")
    shape = None
    if doc.get("shape") is not None:
        try:
            m, n = (int(x) for x in doc["shape"])
            shape = BipartiteShape(m, n)
        except (TypeError, ValueError):
            raise InvalidShapeError("'shape' must be [M, N] with positive integers") from None
        if not (shape.dim == rows == cols):
            raise InvalidShapeError(f"shape {shape} does not match a {rows}x{cols} matrix")
    label = doc.get("label")
    digest = digest_bytes(raw if isinstance(raw, bytes) else raw.encode())
    return MatrixFile(
        flat.reshape(rows, cols), shape, None if label is None else str(label), digest
    )


def read_matrix_file(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_matrix_file(raw)


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def write_matrix_file(path, matrix, shape=None, label=None):
    write_text(path, dumps(MatrixFile(np.asarray(matrix, dtype=complex), shape, label).to_dict()))
