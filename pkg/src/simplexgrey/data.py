"""Reading, aggregating, closing and splitting composition tables.

Tables are CSV files whose first column is ``region`` and whose remaining
headers are time labels, so each row is one part and each column one time step.
Values may be amounts, percentages or proportions; they are always closed.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (BadSplit, DataError, DegenerateDimension, EmptyColumn,
                     NonPositivePart, UnmappedSource)
from .simplex import ZERO_FLOOR, CompositionSeries, closure, replace_zeros

DATASETS = ("canada", "india", "china")
FLOAT_FMT = "%.12g"


@dataclass(frozen=True)
class RawImportTable:
    sources: tuple
    labels: tuple
    values: np.ndarray  # (sources, time)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 2 or values.shape[1] < 2:
            raise DegenerateDimension("a table needs at least 2 rows and 2 time columns")
        if values.shape != (len(self.sources), len(self.labels)):
            raise DataError("table shape does not match its row and column labels")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise NonPositivePart("table values must be finite and non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sources", tuple(self.sources))
        object.__setattr__(self, "labels", tuple(self.labels))


def _parse(text: str, origin: str) -> RawImportTable:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise DataError(f"{origin}: empty file")
    header = [c.strip() for c in rows[0]]
    if header[0].lower() != "region":
        raise DataError(f"{origin}: first column must be 'region', got {header[0]!r}")
    sources, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{origin}:{lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise DataError(f"{origin}:{lineno}: {exc}") from None
        sources.append(row[0].strip())
    return RawImportTable(tuple(sources), tuple(header[1:]), np.array(values).reshape(len(sources), -1))


def read_table(path) -> RawImportTable:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    return _parse(text, str(path))


def load_dataset(name: str) -> RawImportTable:
    """One of the bundled tables: ``canada``, ``india`` or ``china``."""
    if name not in DATASETS:
        raise DataError(f"unknown dataset {name!r}; choose from {DATASETS}")
    text = resources.files("simplexgrey").joinpath("data", f"{name}.csv").read_text("utf-8")
    return _parse(text, f"{name}.csv")


def aggregate(table: RawImportTable, mapping: dict) -> RawImportTable:
    """Sum source rows into regions; regions keep first-appearance order."""
    missing = [s for s in table.sources if s not in mapping]
    if missing:
        raise UnmappedSource(f"no region given for {missing}")
    regions = list(dict.fromkeys(mapping[s] for s in table.sources))
    out = np.zeros((len(regions), len(table.labels)))
    for s, row in zip(table.sources, table.values):
        out[regions.index(mapping[s])] += row
    return RawImportTable(tuple(regions), table.labels, out)


def to_compositions(table: RawImportTable, floor: float = ZERO_FLOOR) -> CompositionSeries:
    """Close every time column into a composition (rows of the result)."""
    totals = table.values.sum(axis=0)
    empty = [lab for lab, t in zip(table.labels, totals) if t <= 0]
    if empty:
        raise EmptyColumn(f"columns with zero total: {empty}")
    values = closure(replace_zeros(table.values.T, floor))
    return CompositionSeries(values, table.labels, table.sources)


def write_series_csv(path_or_file, series: CompositionSeries) -> None:
    """Write a series in the table layout (parts as rows, 12 significant digits)."""
    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["region", *series.labels])
        for j, name in enumerate(series.names):
            w.writerow([name, *(FLOAT_FMT % v for v in series.values[:, j])])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            emit(fh)


@dataclass(frozen=True)
class SplitSpec:
    train_len: int
    test_len: int

    def __post_init__(self):
        if self.train_len < 3:
            raise BadSplit(f"training window needs at least 3 steps, got {self.train_len}")
        if self.test_len < 0:
            raise BadSplit("test length cannot be negative")

    def __str__(self):
        return f"{self.train_len}/{self.test_len}"


def parse_split(text: str) -> SplitSpec:
    """Parse ``"8/2"`` into ``SplitSpec(8, 2)``."""
    try:
        a, b = (int(p) for p in str(text).split("/"))
    except ValueError:
        raise BadSplit(f"split must look like TRAIN/TEST, got {text!r}") from None
    return SplitSpec(a, b)


def split(X: CompositionSeries, plan: SplitSpec):
    """Chronological ``(train, test)`` split."""
    if plan.train_len + plan.test_len != X.n:
        raise BadSplit(f"split {plan} does not cover {X.n} time steps")
    return X[: plan.train_len], X[plan.train_len:]
