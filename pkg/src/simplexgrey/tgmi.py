"""Traditional GM(1,1) bank on ilr coordinates (TGMI).

Each of the ``D-1`` ilr coordinates gets its own GM(1,1) with development
coefficient ``a`` and grey control ``b``; forecasts are mapped back through the
inverse ilr.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeries, SingularNormalEquations
from .ilr import IlrBasis, ilr, ilr_inv, make_basis
from .simplex import _as_array, closure

DEGENERATE_A = 1e-8


@dataclass(frozen=True)
class Gm11Params:
    a: float
    b: float
    u1: float
    n: int

    @property
    def degenerate(self) -> bool:
        # a ~ 0: the response collapses to the constant b
        return abs(self.a) < DEGENERATE_A

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "u1": self.u1, "degenerate": self.degenerate}


def fit_gm11(u) -> Gm11Params:
    """Least-squares GM(1,1) on a real sequence.

    Solves ``u(k) = -a z(k) + b`` for ``k = 2..n`` with background values
    ``z(k) = (U(k) + U(k-1)) / 2`` of the accumulated sequence ``U``.
    """
    u = np.asarray(u, dtype=float)
    n = u.size
    if n < 4:
        raise DegenerateSeries(f"GM(1,1) needs at least 4 points, got {n}")
    acc = np.cumsum(u)
    z = 0.5 * (acc[1:] + acc[:-1])
    A = np.column_stack([-z, np.ones(n - 1)])
    normal = A.T @ A
    if np.linalg.matrix_rank(normal) < 2:
        raise SingularNormalEquations("GM(1,1) normal equations are rank deficient")
    a, b = np.linalg.solve(normal, A.T @ u[1:])
    return Gm11Params(float(a), float(b), float(u[0]), n)


def predict_gm11(p: Gm11Params, n: int, h: int = 0) -> np.ndarray:
    """Restored sequence for steps ``1..n+h``; step 1 is the observed value."""
    total = n + h
    if p.degenerate:
        out = np.full(total, p.b)
    else:
        k = np.arange(total)
        acc = (p.u1 - p.b / p.a) * np.exp(-p.a * k) + p.b / p.a
        out = np.diff(acc, prepend=0.0)
    out[0] = p.u1
    return out


@dataclass(frozen=True)
class TgmiFit:
    models: tuple
    basis: IlrBasis
    fitted: np.ndarray

    @property
    def n(self) -> int:
        return self.fitted.shape[0]

    @property
    def degenerate(self) -> list[bool]:
        return [m.degenerate for m in self.models]

    def to_dict(self) -> dict:
        return {"models": [m.to_dict() for m in self.models], "fitted": self.fitted.tolist()}


def fit_tgmi(X0) -> TgmiFit:
    x0 = np.atleast_2d(closure(_as_array(X0)))
    n, D = x0.shape
    basis = make_basis(D)
    U = ilr(x0, basis)
    models = tuple(fit_gm11(U[:, i]) for i in range(D - 1))
    fitted = ilr_inv(np.column_stack([predict_gm11(m, n) for m in models]), basis)
    return TgmiFit(models, basis, fitted)


def forecast_tgmi(fit: TgmiFit, h: int) -> np.ndarray:
    """``h`` compositions beyond the training window, shape ``(h, D)``."""
    D = fit.basis.D
    if h <= 0:
        return np.empty((0, D))
    U = np.column_stack([predict_gm11(m, fit.n, h)[fit.n:] for m in fit.models])
    return ilr_inv(U, fit.basis)
