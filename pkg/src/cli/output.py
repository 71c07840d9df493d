"""
Result tables and their CSV / JSON serialization.

A CSV file starts with a block of "# key = value" lines carrying the tool
version, the table name and the fully resolved run configuration, followed
by the column header and the rows. Floats are written with repr() so a
re-parsed table writes back byte for byte.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)

Cell = float | int | bool | str | None


@dataclass
class ResultTable:
    """Named table with ordered columns and a metadata header.

    Attributes:
        name: File stem of the table.
        columns: Column names in output order.
        rows: Row tuples, one cell per column.
        meta: Ordered "# key = value" header entries.
    """

    name: str
    columns: tuple[str, ...]
    rows: list[tuple[Cell, ...]] = field(default_factory=list)
    meta: dict[str, str] = field(default_factory=dict)

    def add_row(self, *cells: Any) -> None:
        if len(cells) != len(self.columns):
            raise ValueError(f"table {self.name} has {len(self.columns)} columns, got {len(cells)} cells")
        self.rows.append(tuple(_normalize(c) for c in cells))

    def column(self, name: str) -> list[Cell]:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def _normalize(value: Any) -> Cell:
    # str-valued enums are written by their value, not their name
    if isinstance(value, Enum):
        return _normalize(value.value)
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return str(value)


def _format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str) -> Cell:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def render_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    for key, value in table.meta.items():
        buffer.write(f"# {key} = {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(c) for c in row])
    return buffer.getvalue()


def render_json(table: ResultTable) -> str:
    payload = {
        "meta": table.meta,
        "columns": list(table.columns),
        "rows": [list(row) for row in table.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def write_table(table: ResultTable, out_dir: str | Path, fmt: str = "csv") -> Path:
    """Write a table as <out_dir>/<name>.<fmt>.

    Returns:
        Path of the written file.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown output format {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{table.name}.{fmt}"
    text = render_csv(table) if fmt == "csv" else render_json(table)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {len(table.rows)} rows to {path}")
    return path


def read_table(path: str | Path) -> ResultTable:
    """Parse a table written by write_table (CSV or JSON by extension)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        payload = json.loads(text)
        return ResultTable(
            name=path.stem,
            columns=tuple(payload["columns"]),
            rows=[tuple(row) for row in payload["rows"]],
            meta=dict(payload["meta"]),
        )

    meta: dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# ") and not body:
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        else:
            body.append(line)
    reader = csv.reader(body)
    columns = tuple(next(reader))
    rows = [tuple(_parse_cell(c) for c in row) for row in reader]
    return ResultTable(name=path.stem, columns=columns, rows=rows, meta=meta)
