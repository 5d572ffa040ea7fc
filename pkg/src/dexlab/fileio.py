"""Data-file formats: point-cloud CSVs, trajectory steps, JSON reports.

Point clouds are CSV with a required header row x0..x{d-1}, one point per
row.  Floats print with 17 significant digits so payloads round-trip exactly
in double precision and identical runs emit byte-identical files.  All writes
go through a temp-file-plus-rename so readers never observe partial output.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float) else str(v)
                              for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_points_csv(path, points: np.ndarray) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    header = [f"x{i}" for i in range(pts.shape[1])]
    write_csv(path, header, ([float(v) for v in row] for row in pts))


def read_points_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or not header[0].startswith("x"):
            raise ValueError(f"{path}: expected header row x0..x{{d-1}}")
        rows = [[float(v) for v in row] for row in reader if row]
    return np.asarray(rows, dtype=float)


def emit_trajectory(out_dir, prefix: str, steps: Sequence[np.ndarray]) -> list:
    """Write one CSV per iteration step, named <prefix>_step<k>.csv."""
    out_dir = Path(out_dir)
    names = []
    for k, pts in enumerate(steps):
        name = f"{prefix}_step{k}.csv"
        write_points_csv(out_dir / name, pts)
        names.append(name)
    return names
