"""CSV ingestion and seed selection."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import BandError, SeriesMatrix, derive_seed


class ParseError(BandError):
    """Malformed input file; the message carries row/column coordinates."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Parsed series plus the seed bookkeeping needed for reporting.

    ``extra`` is 1 when the seed was synthesized (median or mean) and
    appended to the data, else 0; requested sizes are shifted by it.
    """

    name: str
    matrix: SeriesMatrix
    seed_policy: str
    extra: int = 0

    @property
    def original_n(self) -> int:
        return self.matrix.n - self.extra


def read_csv(path, header: bool = False, labels: bool = False):
    """Read one series per row; returns ``(values, row_labels)``.

    Row and column numbers in errors are 1-based positions in the file.
    Blank lines are skipped.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(f"{path}: no such file") from None
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc.reason})") from None

    rows, names = [], []
    width = None
    reader = csv.reader(text.splitlines())
    for record in reader:
        line = reader.line_num
        if not record or all(not cell.strip() for cell in record):
            continue
        if header:
            header = False
            continue
        start = 1 if labels else 0
        if labels:
            names.append(record[0].strip())
        cells = record[start:]
        if width is None:
            width = len(cells)
            if width == 0:
                raise ParseError(f"{path}: row {line}: no values")
        elif len(cells) != width:
            raise ParseError(f"{path}: row {line}: expected {width} values, found {len(cells)}")
        row = []
        for j, cell in enumerate(cells, start=start + 1):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {line}, column {j}: not a number: {cell.strip()!r}") from None
            if not math.isfinite(value):
                raise ParseError(f"{path}: row {line}, column {j}: non-finite value {cell.strip()!r}")
            row.append(value)
        rows.append(row)
    if not rows:
        raise ParseError(f"{path}: empty file")
    return np.array(rows, dtype=float), (names if labels else None)


def attach_seed(values, policy: str, labels=None, name: str = "data") -> Dataset:
    """Apply a seed policy: ``index:<i>``, ``median``, ``mean`` or ``row-label:<name>``."""
    if policy in ("median", "mean"):
        return Dataset(name, derive_seed(values, policy, labels), policy, extra=1)
    kind, _, arg = policy.partition(":")
    if kind == "index" and arg:
        try:
            index = int(arg)
        except ValueError:
            raise BandError(f"bad seed index {arg!r}") from None
    elif kind == "row-label" and arg:
        if labels is None:
            raise BandError("seed policy row-label needs a label column (--labels)")
        if arg not in labels:
            raise BandError(f"no row labelled {arg!r}")
        index = list(labels).index(arg)
    else:
        raise BandError(f"unknown seed policy {policy!r}")
    return Dataset(name, SeriesMatrix(values, seed_index=index, labels=labels), policy)


def ingest_csv(path, header: bool = False, labels: bool = False, seed: str = "index:0") -> Dataset:
    values, names = read_csv(path, header=header, labels=labels)
    return attach_seed(values, seed, names, name=Path(path).stem)
