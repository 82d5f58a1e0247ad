"""General accumulation: lower-triangular weighting of a composition series.

Row ``k`` of the accumulated series is ``⊕_j b_kj ⊗ x_j`` over ``j <= k``.  In
log space that is a plain matrix product, which is how it is computed here.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, DimensionMismatch, SingularMatrix
from .simplex import CompositionSeries, _as_array, _close_logs, closure

DIAG_FLOOR = 1e-6
EXTENSIONS = ("unit", "trailing", "level")


@dataclass(frozen=True)
class AccumulationMatrix:
    """Lower-triangular ``n x n`` weights with a nonzero diagonal."""

    matrix: np.ndarray

    def __post_init__(self):
        B = np.array(self.matrix, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise DimensionMismatch(f"accumulation matrix must be square, got {B.shape}")
        if not np.all(np.isfinite(B)):
            raise DataError("accumulation weights must be finite")
        if np.any(np.triu(B, 1) != 0):
            raise DataError("accumulation matrix must be lower triangular")
        if np.any(np.abs(np.diag(B)) < DIAG_FLOOR):
            raise SingularMatrix(f"diagonal entries must satisfy |b_ii| >= {DIAG_FLOOR}")
        B.setflags(write=False)
        object.__setattr__(self, "matrix", B)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def rows(self) -> list[list[float]]:
        """Row-major lower-triangular entries, ``[[b11], [b21, b22], ...]``."""
        return [self.matrix[k, : k + 1].tolist() for k in range(self.n)]

    @classmethod
    def from_rows(cls, rows) -> "AccumulationMatrix":
        n = len(rows)
        B = np.zeros((n, n))
        for k, row in enumerate(rows):
            if len(row) != k + 1:
                raise DataError(f"row {k + 1} must have {k + 1} entries, got {len(row)}")
            B[k, : k + 1] = row
        return cls(B)

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps({"n": self.n, "rows": self.rows()}, indent=2) + "\n")

    @classmethod
    def from_json(cls, path) -> "AccumulationMatrix":
        return cls.from_rows(json.loads(Path(path).read_text())["rows"])

    def to_heatmap_csv(self, path) -> None:
        """Long-format ``row,col,weight`` table, upper triangle omitted."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "weight"])
            for i in range(self.n):
                for j in range(i + 1):
                    w.writerow([i + 1, j + 1, repr(float(self.matrix[i, j]))])


def standard_ago(n: int) -> AccumulationMatrix:
    """Classical one-time accumulation: every lower-triangular weight is 1."""
    return AccumulationMatrix(np.tril(np.ones((n, n))))


def identity(n: int) -> AccumulationMatrix:
    return AccumulationMatrix(np.eye(n))


def _matrix(B) -> np.ndarray:
    return B.matrix if isinstance(B, AccumulationMatrix) else AccumulationMatrix(B).matrix


def _wrap(like, values):
    return like.replace(values) if isinstance(like, CompositionSeries) else values


def accumulate(B, X):
    """``B ⊗ X``: accumulate a series (array or :class:`CompositionSeries`)."""
    Bm = _matrix(B)
    x = closure(np.atleast_2d(_as_array(X)))
    if Bm.shape[0] != x.shape[0]:
        raise DimensionMismatch(f"B is {Bm.shape[0]}x{Bm.shape[0]} but series has {x.shape[0]} rows")
    return _wrap(X, _close_logs(Bm @ np.log(x)))


def deaccumulate(B, Y):
    """``B^-1 ⊗ Y`` by forward substitution in simplex arithmetic.

    ``x(k) = (1/b_kk) ⊗ (y(k) ⊖ ⊕_{j<k} b_kj ⊗ x(j))``
    """
    Bm = _matrix(B)
    y = closure(np.atleast_2d(_as_array(Y)))
    n = Bm.shape[0]
    if n != y.shape[0]:
        raise DimensionMismatch(f"B is {n}x{n} but series has {y.shape[0]} rows")
    ly = np.log(y)
    lx = np.empty_like(ly)
    for k in range(n):
        acc = Bm[k, :k] @ lx[:k] if k else 0.0
        lx[k] = (ly[k] - acc) / Bm[k, k]
        lx[k] -= lx[k].mean()
    return _wrap(Y, _close_logs(lx))


def extend_for_forecast(B, h: int, mode: str = "unit") -> AccumulationMatrix:
    """Grow ``B`` by ``h`` rows so accumulated forecasts can be inverted.

    The original block is kept.  New rows depend on ``mode``:

    ``"unit"``
        weight 1 on every column (classical accumulation);
    ``"trailing"``
        row ``n``'s weights re-aligned by lag, so the newest observation keeps
        weight ``b_nn`` and observations older than the window get 0;
    ``"level"``
        a single diagonal weight equal to the sum of row ``n``, i.e. the
        accumulated value is read as a weighted level of the newest point.
    """
    Bm = _matrix(B)
    if h < 0:
        raise ValueError("horizon must be non-negative")
    if mode not in EXTENSIONS:
        raise ValueError(f"unknown extension {mode!r}; choose from {EXTENSIONS}")
    n = Bm.shape[0]
    out = np.zeros((n + h, n + h))
    out[:n, :n] = Bm
    last = Bm[n - 1]
    for t in range(1, h + 1):
        r = n - 1 + t
        if mode == "unit":
            out[r, : r + 1] = 1.0
        elif mode == "trailing":
            out[r, t: r + 1] = last
        else:
            out[r, r] = last.sum()
    return AccumulationMatrix(out)
