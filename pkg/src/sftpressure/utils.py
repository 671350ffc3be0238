"""Utility functions for sftpressure: float formatting, artifact writers, input checks"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

MACHINE_DIGITS = 17
TABLE_DIGITS = 7


def format_float(value: float, digits: int = MACHINE_DIGITS) -> str:
    """Format a float with a fixed number of significant digits

    Args:
        value: Number to format
        digits: Significant digits (17 for artifacts, 7 for tables)

    Returns:
        Text form; non-finite values become "nan", "inf" or "-inf"

    Examples:
        >>> format_float(0.1)
        '0.10000000000000001'
        >>> format_float(1.6180339887, digits=7)
        '1.618034'
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def _render(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"Cannot write non-finite float {obj} to JSON")
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_render(v, indent, level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_render(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    raise TypeError(f"Cannot serialize {type(obj).__name__} to JSON")


def to_json(obj: Any, indent: int = 2) -> str:
    """JSON text with every float written at 17 significant digits

    Dict key order is preserved, so equal inputs give byte-identical text.

    Examples:
        >>> to_json({"pressure": 0.5, "corner": False})
        '{\\n  "pressure": 0.5,\\n  "corner": false\\n}\\n'
    """
    return _render(obj, indent, 0) + "\n"


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text; float cells get 17 significant digits

    Examples:
        >>> to_csv(["t", "pressure"], [[0.0, 0.5]])
        't,pressure\\n0,0.5\\n'
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, (float, np.floating)) else v for v in row]
        )
    return buffer.getvalue()


def read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    """Header and float rows of a numeric CSV artifact

    Raises:
        ValueError: Empty file or a non-numeric cell
    """
    with open(path, newline="", encoding="utf-8") as f:
        lines = list(csv.reader(f))
    if not lines:
        raise ValueError(f"Empty CSV file: {path}")
    try:
        rows = np.array([[float(v) for v in line] for line in lines[1:]], dtype=float)
    except ValueError as e:
        raise ValueError(f"Non-numeric cell in {path}: {e}") from e
    return lines[0], rows


def write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def sibling_path(path: Path, suffix: str) -> Path:
    """out.csv, "_biconjugate" -> out_biconjugate.csv"""
    path = Path(path)
    return path.with_name(f"{path.stem}{suffix}{path.suffix}")


def validate_input_exists(path: Path) -> None:
    """Validate that a system document exists

    Args:
        path: Path to the JSON document

    Raises:
        FileNotFoundError: If file doesn't exist
        ValueError: If file is not a JSON document
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")

    if not path.suffix.lower() == ".json":
        raise ValueError(f"File is not a JSON document: {path}")
