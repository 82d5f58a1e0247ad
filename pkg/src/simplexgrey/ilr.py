"""Isometric log-ratio coordinates.

The basis is the usual balance construction: column ``i`` (1-based) holds
``sqrt(1/(i(i+1)))`` in its first ``i`` rows and ``-sqrt(i/(i+1))`` in row
``i+1``.  Columns are orthonormal and sum to zero, so ``H.T @ log(x)`` gives the
coordinates of ``x`` and ``closure(exp(H @ y))`` inverts them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateDimension, DimensionMismatch
from .simplex import CompositionSeries, _close_logs, closure


@dataclass(frozen=True)
class IlrBasis:
    D: int
    H: np.ndarray


@lru_cache(maxsize=None)
def make_basis(D: int) -> IlrBasis:
    """Orthonormal ``D x (D-1)`` contrast matrix for ``D`` parts."""
    if D < 2:
        raise DegenerateDimension(f"need at least 2 parts, got {D}")
    H = np.zeros((D, D - 1))
    for i in range(1, D):
        H[:i, i - 1] = np.sqrt(1.0 / (i * (i + 1)))
        H[i, i - 1] = -np.sqrt(i / (i + 1.0))
    if not np.allclose(H.T @ H, np.eye(D - 1), atol=1e-12, rtol=0):
        raise AssertionError("ilr basis is not orthonormal")
    H.setflags(write=False)
    return IlrBasis(D, H)


def _basis_for(D: int, basis: IlrBasis | None) -> IlrBasis:
    if basis is None:
        return make_basis(D)
    if basis.D != D:
        raise DimensionMismatch(f"basis is for {basis.D} parts, data has {D}")
    return basis


def ilr(x, basis: IlrBasis | None = None) -> np.ndarray:
    """Coordinates of a composition, or of every row of a matrix/series."""
    if isinstance(x, CompositionSeries):
        x = x.values
    x = closure(x)
    b = _basis_for(x.shape[-1], basis)
    return np.log(x) @ b.H


def ilr_inv(y, basis: IlrBasis | None = None) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    b = _basis_for(y.shape[-1] + 1, basis)
    return _close_logs(y @ b.H.T)


def ilr_series(X: CompositionSeries, basis: IlrBasis | None = None) -> np.ndarray:
    """``n x (D-1)`` coordinate matrix of a series."""
    return ilr(X.values, basis)


def ilr_series_inv(U, like: CompositionSeries | None = None,
                   basis: IlrBasis | None = None):
    """Invert coordinates row by row; wrap in a series when ``like`` is given."""
    values = np.atleast_2d(ilr_inv(U, basis))
    if like is None:
        return values
    return like.replace(values)
