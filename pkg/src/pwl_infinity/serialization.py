"""JSON and CSV output with a fixed number of significant digits."""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from .config import settings
from .models import RegionMap, Trajectory


def to_jsonable(value: Any) -> Any:
    """Convert models, enums and numpy values into plain JSON types."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump(mode="json"))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    return value


def format_float(value: float, digits: Optional[int] = None) -> str:
    digits = settings.output_digits if digits is None else digits
    return f"{value:.{digits}g}"


def _encode(value: Any, digits: int, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    close = "\n" + " " * (indent * level) if indent else ""
    sep = "," if indent else ", "

    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return json.dumps(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            return "null"
        text = format_float(value, digits)
        # Keep floats recognizable as floats
        if all(c not in text for c in ".eE"):
            text += ".0"
        return text
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {_encode(v, digits, indent, level + 1)}"
            for k, v in value.items()
        ]
        return "{" + sep.join(items) + close + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{pad}{_encode(v, digits, indent, level + 1)}" for v in value]
        return "[" + sep.join(items) + close + "]"
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(value: Any, digits: Optional[int] = None, indent: int = 2) -> str:
    """
    Serialize to JSON with floats written to a fixed number of significant digits.

    Args:
        value: Models, mappings, sequences and scalars
        digits: Significant digits; defaults to settings.output_digits
        indent: Indentation width, 0 for a single line

    Returns:
        JSON text
    """
    digits = settings.output_digits if digits is None else digits
    return _encode(to_jsonable(value), digits, indent, 0)


def format_row(row: Sequence[Any]) -> List[Any]:
    return [format_float(v) if isinstance(v, float) else ("" if v is None else v) for v in row]


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV document with floats written to the configured digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(format_row(row) for row in rows)
    return buffer.getvalue()


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a CSV file, formatting floats with the configured digits."""
    Path(path).write_text(csv_text(header, rows), encoding="utf-8")


def trajectory_rows(trajectory: Trajectory) -> list:
    return [(p.t, p.x, p.y, p.event) for p in trajectory.points]


def write_trajectory_csv(trajectory: Trajectory, path: str | Path) -> None:
    """Polyline as CSV with columns t, x, y, event."""
    write_rows(path, ("t", "x", "y", "event"), trajectory_rows(trajectory))


def region_rows(region: RegionMap) -> list:
    """Labels and boundary points of a region map as CSV rows."""
    rows = [(label.delta1, label.delta2, label.count, "label", None) for label in region.labels]
    rows += [
        (point.delta1, point.delta2, None, point.curve, point.double_root)
        for point in region.boundaries
    ]
    return rows


REGION_HEADER = ("delta1", "delta2", "count", "kind", "double_root")
