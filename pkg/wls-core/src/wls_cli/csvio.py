"""CSV readers and writers for the command line front end.

Dialect: comma separated, decimal point, UTF-8, optional single header row
(detected as a first row that does not parse as numbers). Numbers are
written with 17 significant digits.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import numpy.typing as npt

from wls.bench.export import format_float
from wls.core.errors import DatasetFormatError
from wls.core.types import Dataset, FloatArray


def read_dataset(path: Path) -> Dataset:
    """Last column is the response, the others are the carriers."""
    try:
        with path.open(encoding="utf-8-sig", newline="") as handle:
            raw_rows = list(csv.reader(handle))
    except OSError as exc:
        msg = f"cannot read {path}: {exc}"
        raise DatasetFormatError(msg) from exc
    except UnicodeDecodeError as exc:
        msg = f"{path} is not UTF-8 text: {exc}"
        raise DatasetFormatError(msg) from exc

    numbered = [(i + 1, row) for i, row in enumerate(raw_rows) if any(c.strip() for c in row)]
    if not numbered:
        msg = f"{path} contains no data rows"
        raise DatasetFormatError(msg)
    if _is_header(numbered[0][1]):
        numbered = numbered[1:]
    if not numbered:
        msg = f"{path} contains a header but no data rows"
        raise DatasetFormatError(msg)

    width = len(numbered[0][1])
    if width < 1:
        msg = "expected at least one column"
        raise DatasetFormatError(msg, line=numbered[0][0])
    values = np.empty((len(numbered), width))
    for position, (line, row) in enumerate(numbered):
        if len(row) != width:
            msg = f"expected {width} columns, found {len(row)}"
            raise DatasetFormatError(msg, line=line)
        for column, cell in enumerate(row):
            values[position, column] = _parse_cell(cell, line, column + 1)
    return Dataset(x=values[:, :-1], y=values[:, -1])


def write_residuals(path: Path, residuals: npt.ArrayLike) -> None:
    """``index,residual`` rows, index starting at 0."""
    vector = np.asarray(residuals, dtype=np.float64)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["index", "residual"])
        writer.writerows([i, format_float(float(v))] for i, v in enumerate(vector))


def read_residuals(path: Path) -> FloatArray:
    with path.open(encoding="utf-8-sig", newline="") as handle:
        rows = list(csv.reader(handle))
    body = rows[1:] if rows and _is_header(rows[0]) else rows
    return np.array(
        [_parse_cell(row[1], line, 2) for line, row in enumerate(body, start=2) if row],
        dtype=np.float64,
    )


def write_table(path: Path | None, header: Sequence[str], columns: Sequence[FloatArray]) -> str:
    """Write equally long float columns; returns the CSV text (also written to ``path``)."""
    lines = [",".join(header)]
    for row in zip(*columns, strict=True):
        lines.append(",".join(format_float(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if path is not None:
        path.write_text(text, encoding="utf-8")
    return text


def _is_header(row: Sequence[str]) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _parse_cell(cell: str, line: int, column: int) -> float:
    text = cell.strip()
    try:
        value = float(text)
    except ValueError:
        msg = f"column {column}: cannot parse {cell!r} as a number"
        raise DatasetFormatError(msg, line=line) from None
    if not np.isfinite(value):
        msg = f"column {column}: non-finite value {cell!r}"
        raise DatasetFormatError(msg, line=line)
    return value
