"""CSV and JSON serialization for measures, grids, matrices and results.

Measure CSV: one `x_1,...,x_d,weight` row per support point.  Grid CSV:
an `origin,step` header line followed by one density value per line.
All floats are emitted with 17 significant digits.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .transport import DiscreteMeasure, GridDensity


class IOFormatError(ValueError):
    """Raised for malformed input files; messages carry line numbers."""


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with full-precision floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{inner}"{k}": {dumps_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = [f"{inner}{dumps_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, obj) -> None:
    Path(path).write_text(dumps_json(obj) + "\n")


def write_measure_csv(path, measure: DiscreteMeasure) -> None:
    lines = []
    for point, weight in zip(measure.points, measure.weights):
        fields = [format_float(c) for c in point] + [format_float(weight)]
        lines.append(",".join(fields))
    Path(path).write_text("\n".join(lines) + "\n")


def write_grid_csv(path, grid: GridDensity) -> None:
    lines = [f"{format_float(grid.origin)},{format_float(grid.step)}"]
    lines.extend(format_float(v) for v in grid.values)
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_rows(path) -> list[tuple[int, list[float]]]:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append((lineno, [float(f) for f in line.split(",")]))
        except ValueError:
            raise IOFormatError(
                f"{path}: line {lineno}: cannot parse {line!r}") from None
    if not rows:
        raise IOFormatError(f"{path}: no data rows")
    return rows


def read_measure_csv(path):
    """Read a DiscreteMeasure or GridDensity, detected by shape: a 2-field
    header followed by 1-field rows is a grid, uniform multi-field rows are
    a discrete measure."""
    rows = _parse_rows(path)
    widths = {len(fields) for _, fields in rows}
    if (len(rows) >= 2 and len(rows[0][1]) == 2
            and all(len(f) == 1 for _, f in rows[1:])):
        origin, step = rows[0][1]
        return GridDensity(origin, step,
                           np.array([f[0] for _, f in rows[1:]]))
    if len(widths) != 1:
        raise IOFormatError(
            f"{path}: inconsistent field counts {sorted(widths)}")
    width = widths.pop()
    if width < 2:
        raise IOFormatError(f"{path}: rows need coordinates and a weight")
    data = np.array([fields for _, fields in rows])
    return DiscreteMeasure(data[:, :-1], data[:, -1])


def read_coefficients(path) -> np.ndarray:
    """Read a basis coefficient vector, one value per line."""
    rows = _parse_rows(path)
    bad = next((lineno for lineno, f in rows if len(f) != 1), None)
    if bad is not None:
        raise IOFormatError(f"{path}: line {bad}: expected a single value")
    return np.array([f[0] for _, f in rows])


def write_matrix_csv(path, matrix: np.ndarray) -> None:
    lines = [",".join(format_float(v) for v in row) for row in matrix]
    Path(path).write_text("\n".join(lines) + "\n")


def write_columns_csv(path, header: str, *columns) -> None:
    """Aligned numeric columns under a comment-style header line."""
    lines = [f"# {header}"]
    for row in zip(*columns):
        lines.append(",".join(format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")
