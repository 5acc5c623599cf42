"""Typed result tables with deterministic, round-trippable CSV emission.

Format contract: one leading ``#`` provenance line, a header line, then one
line per row; field separator ``,``, decimal point ``.``, floats written with
17 significant digits so parsing reproduces the binary values exactly.  Files
are written to a temporary name and atomically renamed, so failures leave no
partial output.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

import numpy as np


def format_float(value: float) -> str:
    """17-significant-digit decimal form that round-trips float64 exactly."""
    text = format(float(value), ".17g")
    if not any(ch in text for ch in ".eEnN"):  # keep integral floats typed as floats
        text += ".0"
    return text


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean cells are not part of the table format")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    text = str(value)
    if "," in text or "\n" in text or "#" in text:
        raise ValueError(f"string cell {text!r} contains reserved characters")
    return text


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass(frozen=True)
class ResultTable:
    """Column names plus typed rows and a provenance string."""

    columns: tuple
    rows: list
    provenance: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        rows = [tuple(r) for r in self.rows]
        for r in rows:
            if len(r) != len(self.columns):
                raise ValueError(
                    f"row of width {len(r)} does not match {len(self.columns)} columns"
                )
        object.__setattr__(self, "rows", rows)


def write_csv(table: ResultTable, path: str) -> str:
    """Serialize a table; atomic rename ensures no partial files on failure."""
    lines = [f"# {table.provenance}"]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    payload = "\n".join(lines) + "\n"

    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_csv(path: str) -> ResultTable:
    """Parse a CSV written by write_csv back into a typed table."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if len(lines) < 2 or not lines[0].startswith("#"):
        raise ValueError(f"{path} is not a dissipaq result file")
    provenance = lines[0][1:].strip()
    columns = tuple(lines[1].split(","))
    rows = [tuple(_parse_cell(cell) for cell in line.split(",")) for line in lines[2:] if line]
    return ResultTable(columns=columns, rows=rows, provenance=provenance)
