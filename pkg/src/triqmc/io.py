"""CSV serialization of point sets."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np


def _fmt(x: float) -> str:
    # 17 significant digits round-trip every double
    return format(float(x), ".17g")


def points_to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("x", "y"))
    for x, y in np.asarray(points, dtype=float).reshape(-1, 2):
        w.writerow((_fmt(x), _fmt(y)))
    return buf.getvalue()


def read_points_csv(path: str | Path) -> np.ndarray:
    """Read an ``x,y`` CSV (header required) into an ``(n, 2)`` array."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header[:2] != ["x", "y"]:
            raise ValueError(f"{path}: expected header 'x,y', got {header!r}")
        rows = [(float(r[0]), float(r[1])) for r in reader if r]
    return np.array(rows, dtype=float).reshape(-1, 2)
