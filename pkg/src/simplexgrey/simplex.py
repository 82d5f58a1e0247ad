r"""Aitchison geometry on the simplex.

Compositions are plain ``numpy`` arrays whose last axis runs over the D parts,
so every operation here works on a single composition (shape ``(D,)``) and on
a stack of them (shape ``(n, D)``) alike.  :class:`CompositionSeries` adds time
labels and part names on top of an ``(n, D)`` array.

Perturbation and powering are the simplex counterparts of vector addition and
scalar multiplication:

.. math::

    x \oplus y = C(x_1 y_1, \dots, x_D y_D), \qquad
    a \otimes x = C(x_1^a, \dots, x_D^a)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateDimension, DimensionMismatch, NonPositivePart

ZERO_FLOOR = 1e-6
SUM_TOL = 1e-9


def _as_array(x) -> np.ndarray:
    if isinstance(x, CompositionSeries):
        return x.values
    return np.asarray(x, dtype=float)


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(
            f"compositions have {x.shape[-1]} and {y.shape[-1]} parts")


def closure(v) -> np.ndarray:
    """Scale positive vectors (or the rows of a matrix) to unit sum.

    Raises
    ------
    NonPositivePart
        If any entry is zero, negative or not finite.
    DegenerateDimension
        If there are fewer than two parts.
    """
    v = _as_array(v)
    if v.ndim == 0 or v.ndim > 2:
        raise DegenerateDimension("closure expects a vector or a matrix")
    if v.shape[-1] < 2:
        raise DegenerateDimension(f"need at least 2 parts, got {v.shape[-1]}")
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise NonPositivePart("all parts must be finite and strictly positive")
    return v / v.sum(axis=-1, keepdims=True)


def replace_zeros(v, floor: float = ZERO_FLOOR) -> np.ndarray:
    """Replace exact zeros by ``floor``; negative entries are still rejected."""
    v = np.array(_as_array(v), dtype=float)
    if np.any(v < 0):
        raise NonPositivePart("negative values cannot be closed into a composition")
    v[v == 0] = floor
    return v


def _close_logs(z: np.ndarray) -> np.ndarray:
    # exp of log-parts, shifted by the row max to avoid overflow
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def uniform(D: int) -> np.ndarray:
    """The neutral element of perturbation, ``[1/D, ..., 1/D]``."""
    if D < 2:
        raise DegenerateDimension(f"need at least 2 parts, got {D}")
    return np.full(D, 1.0 / D)


def perturb(x, y, inverse: bool = False) -> np.ndarray:
    """``x ⊕ y``, or ``x ⊖ y`` when ``inverse`` is set. Broadcasts over rows."""
    x, y = _as_array(x), _as_array(y)
    _check_same_dim(x, y)
    return closure(x / y if inverse else x * y)


def power(a: float, x) -> np.ndarray:
    """``a ⊗ x``. ``a`` may be an array broadcasting against the rows of ``x``."""
    x = closure(x)
    a = np.asarray(a, dtype=float)
    if a.ndim:
        a = a[..., None]
    return _close_logs(a * np.log(x))


def clr(x) -> np.ndarray:
    """Centred log-ratio coordinates; used internally for inner products."""
    lx = np.log(closure(x))
    return lx - lx.mean(axis=-1, keepdims=True)


def clr_inv(z) -> np.ndarray:
    return _close_logs(np.asarray(z, dtype=float))


def inner_product(x, y):
    r"""Aitchison inner product :math:`\sum_i \ln\frac{x_i}{g(x)}\ln\frac{y_i}{g(y)}`.

    Returns a float for single compositions and one value per row for stacks.
    """
    x, y = _as_array(x), _as_array(y)
    _check_same_dim(x, y)
    out = np.sum(clr(x) * clr(y), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def norm(x):
    return np.sqrt(inner_product(x, x))


def distance(x, y):
    """Aitchison distance, the norm of ``x ⊖ y``."""
    d = perturb(x, y, inverse=True)
    return np.sqrt(np.maximum(inner_product(d, d), 0.0))


def series_inner_product(X, Y) -> float:
    """Sum of the rowwise inner products of two equally long series."""
    X, Y = np.atleast_2d(_as_array(X)), np.atleast_2d(_as_array(Y))
    if X.shape != Y.shape:
        raise DimensionMismatch(f"series shapes differ: {X.shape} vs {Y.shape}")
    return float(np.sum(inner_product(X, Y)))


def center(X) -> np.ndarray:
    """Closed vector of columnwise geometric means."""
    X = np.atleast_2d(closure(X))
    return _close_logs(np.log(X).mean(axis=0))


def centralize(X) -> np.ndarray:
    """Perturb every row by the inverse of the series centre."""
    X = _as_array(X)
    return perturb(X, center(X), inverse=True)


def decentralize(X, c) -> np.ndarray:
    return perturb(X, c)


def is_composition(x, tol: float = SUM_TOL) -> bool:
    x = _as_array(x)
    return bool(
        x.shape[-1] >= 2
        and np.all(np.isfinite(x))
        and np.all(x > 0)
        and np.all(np.abs(x.sum(axis=-1) - 1.0) <= tol)
    )


@dataclass(frozen=True)
class CompositionSeries:
    """Time-ordered compositions with labels.

    ``values`` has one row per time step; ``labels`` names the time steps and
    ``names`` the parts.
    """

    values: np.ndarray
    labels: tuple = field(default=())
    names: tuple = field(default=())

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if values.ndim != 2:
            raise DegenerateDimension("a series must be a 2-D array")
        if not is_composition(values):
            raise NonPositivePart(
                "series rows must be positive and sum to 1; use from_raw to close them")
        values = values.copy()
        values.setflags(write=False)
        n, D = values.shape
        labels = tuple(self.labels) if len(self.labels) else tuple(str(k + 1) for k in range(n))
        names = tuple(self.names) if len(self.names) else tuple(f"part{j + 1}" for j in range(D))
        if len(labels) != n:
            raise DimensionMismatch(f"{len(labels)} labels for {n} rows")
        if len(names) != D:
            raise DimensionMismatch(f"{len(names)} part names for {D} parts")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "names", names)

    @classmethod
    def from_raw(cls, rows, labels: Sequence = (), names: Sequence = (),
                 floor: float = ZERO_FLOOR) -> "CompositionSeries":
        """Close raw non-negative rows (amounts, percentages) into a series."""
        return cls(closure(replace_zeros(np.atleast_2d(rows), floor)),
                   tuple(labels), tuple(names))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def D(self) -> int:
        return self.values.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx) -> "CompositionSeries":
        if not isinstance(idx, slice):
            raise TypeError("index a series with a slice; use .values for rows")
        return CompositionSeries(self.values[idx], self.labels[idx], self.names)

    def replace(self, values, labels: Sequence | None = None) -> "CompositionSeries":
        return CompositionSeries(values, self.labels if labels is None else tuple(labels),
                                 self.names)
