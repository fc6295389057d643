"""CSV / JSON file formats shared by the CLI.

Points: one row per point, columns are coordinates, no header by default.
Labels: one integer per row, aligned with the points file.
Matrices: dense CSV, one row per line.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInput


def read_points_csv(path, header: bool = False) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if i == 0 and header:
                continue
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise InvalidInput(f"{path}: bad numeric row {i}: {row!r}") from exc
    if not rows:
        raise InvalidInput(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidInput(f"{path}: inconsistent column counts {sorted(widths)}")
    return np.asarray(rows, dtype=np.float64)


def write_points_csv(path, points: np.ndarray):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in np.atleast_2d(points):
            writer.writerow([repr(float(v)) for v in row])


def read_labels_csv(path) -> np.ndarray:
    values = read_points_csv(path)
    if values.shape[1] != 1:
        raise InvalidInput(f"{path}: labels file must have one column")
    labels = values[:, 0]
    if not np.all(labels == np.round(labels)):
        raise InvalidInput(f"{path}: labels must be integers")
    return labels.astype(np.int64)


def write_labels_csv(path, labels: np.ndarray):
    with open(path, "w", newline="") as fh:
        for v in labels:
            fh.write(f"{int(v)}\n")


def read_matrix_csv(path) -> np.ndarray:
    return read_points_csv(path)


def write_matrix_csv(path, M: np.ndarray):
    write_points_csv(path, M)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_json(path, payload: dict):
    Path(path).write_text(json.dumps(payload, indent=2, default=_json_default) + "\n")


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, default=_json_default)
