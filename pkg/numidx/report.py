from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Any, Dict, Iterable, List, Mapping, Sequence

import numpy as np
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from numidx.geometry.norms import Vec2
from numidx.geometry.operators import Operator2x2

SIGNIFICANT_DIGITS = 12


def round_sig(x: float) -> float:
    """Round to 12 significant digits; inf and nan pass through."""
    if not math.isfinite(x):
        return x
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def to_payload(obj: Any) -> Any:
    """
    Convert result objects to plain JSON-ready data.
    Keeps a consistent structure between the json, csv and text renderers.
    """
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Vec2):
        return [round_sig(obj.x), round_sig(obj.y)]
    if isinstance(obj, Operator2x2):
        return [round_sig(t) for t in obj.entries]
    if isinstance(obj, BaseModel):
        return to_payload(obj.model_dump(by_alias=True))
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_payload(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return to_payload(obj.tolist())
    if isinstance(obj, Mapping):
        return {str(k): to_payload(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_payload(v) for v in obj]
    return repr(obj)


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


# ---------------------------------------------------------------------------
# Renderers
# ---------------------------------------------------------------------------


def render_json(payload: Any) -> str:
    return json.dumps(to_payload(payload), indent=2)


def render_csv(rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        data = to_payload(row)
        writer.writerow([_cell(data.get(c)) for c in columns])
    return buf.getvalue()


def _flatten(data: Dict[str, Any], prefix: str = "") -> List[tuple[str, Any]]:
    out: List[tuple[str, Any]] = []
    for k, v in data.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and v:
            out.extend(_flatten(v, prefix=f"{key}."))
        else:
            out.append((key, v))
    return out


def render_text(payload: Any, *, title: str | None = None, columns: Sequence[str] | None = None) -> str:
    """
    A rich table: one row per record when ``columns`` is given, otherwise a
    two-column key/value listing of a (flattened) single result.
    """
    table = Table(title=title)
    if columns is not None:
        for c in columns:
            table.add_column(c, justify="right")
        for row in to_payload(payload):
            table.add_row(*(_cell(row.get(c)) for c in columns))
    else:
        table.add_column("field")
        table.add_column("value", justify="right")
        data = to_payload(payload)
        if not isinstance(data, dict):
            data = {"value": data}
        for key, value in _flatten(data):
            table.add_row(key, _cell(value))

    console = Console(file=io.StringIO(), width=160, color_system=None, force_terminal=False)
    console.print(table)
    return console.file.getvalue()


def render(payload: Any, fmt: str, *, title: str | None = None, columns: Sequence[str] | None = None) -> str:
    if fmt == "json":
        return render_json(payload)
    if fmt == "csv":
        if columns is None:
            data = to_payload(payload)
            rows = data if isinstance(data, list) else [data]
            columns = list(rows[0].keys()) if rows and isinstance(rows[0], dict) else ["value"]
            if rows and not isinstance(rows[0], dict):
                rows = [{"value": r} for r in rows]
            return render_csv(rows, columns)
        return render_csv(payload, columns)
    if fmt == "text":
        return render_text(payload, title=title, columns=columns)
    raise ValueError(f"unknown output format: {fmt!r}")
