"""
Output Writers - Deterministic CSV/JSON tables with sidecar manifests
"""
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from utils.errors import DomainError


logger = logging.getLogger(__name__)


def parse_sweep(text: str) -> List[float]:
    """`start:stop:count` inclusive grid, or a comma-separated list"""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"sweep {text!r} must read start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise DomainError(f"sweep {text!r} needs a positive count")
        if count == 1:
            return [start]
        return [float(v) for v in np.linspace(start, stop, count)]
    return parse_list(text, float)


def parse_list(text: str, cast=float) -> list:
    """Comma-separated values; `a:b` ranges are expanded for integers"""
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if cast is int and ":" in item:
            low, high = item.split(":")
            values.extend(range(int(low), int(high) + 1))
        else:
            values.append(cast(item))
    return values


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _jsonable(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "model_dump"):
        return value.model_dump(mode="json")
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_json(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    records = [dict(zip(header, (format_value(v) for v in row))) for row in rows]
    return dumps(records)


def manifest_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta.json")


def write_table(
    path: Optional[Path],
    header: Sequence[str],
    rows: List[Sequence[Any]],
    manifest: Dict[str, Any],
    fmt: str = "csv",
) -> Optional[Path]:
    """
    Write a table and its `<output>.meta.json` manifest

    Args:
        path: Target file, or None for stdout (no manifest is written then)
        header: Column names
        rows: Row values in output order
        manifest: Resolved configuration recorded next to the table
        fmt: "csv" or "json"

    Returns:
        The manifest path, when one was written
    """
    text = render_csv(header, rows) if fmt == "csv" else render_json(header, rows)
    if path is None:
        sys.stdout.write(text)
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    meta = manifest_path(path)
    meta.write_text(dumps({**manifest, "columns": list(header), "rows": len(rows)}), encoding="utf-8")
    logger.info("wrote %s (%d rows)", path, len(rows))
    return meta


def write_json(path: Optional[Path], payload: Any) -> None:
    text = dumps(payload)
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)
