"""General-accumulation discrete GM(1,1) in the simplex (GADGMSS).

Pipeline: accumulate with ``B``, centre the accumulated series, fit the single
development coefficient of ``ẋ(k+1) = β₁ ⊗ ẋ(k)`` by least squares in the
Aitchison metric, predict, de-centre and de-accumulate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accumulation import AccumulationMatrix, accumulate, deaccumulate, extend_for_forecast
from .errors import DegenerateSeries, DimensionMismatch
from .ilr import ilr
from .simplex import (_as_array, center, centralize, closure,
                      decentralize, distance, power, series_inner_product)

DENOM_TOL = 1e-12
CONSTANT_TOL = 1e-12


@dataclass(frozen=True)
class GadgmssFit:
    beta1: float
    center: np.ndarray          # centre of the accumulated series
    B: AccumulationMatrix
    fitted: np.ndarray          # X̂(0) over the training steps
    sse: float
    accumulated: np.ndarray     # X(1) = B ⊗ X(0)
    centered: np.ndarray        # Ẋ(1)
    fitted_accumulated: np.ndarray  # X̂(1), first row observed

    @property
    def n(self) -> int:
        return self.fitted.shape[0]

    def to_dict(self) -> dict:
        return {
            "beta1": self.beta1,
            "center": self.center.tolist(),
            "B": self.B.rows(),
            "sse": self.sse,
            "fitted": self.fitted.tolist(),
        }


def estimate_beta1(Xc) -> float:
    """Least-squares development coefficient of a centralized series.

    ``β̂₁ = Σ (ẋ(k+1), ẋ(k))_S / Σ (ẋ(k), ẋ(k))_S``
    """
    Xc = np.atleast_2d(_as_array(Xc))
    if Xc.shape[0] < 2:
        raise DegenerateSeries("need at least two rows to estimate β₁")
    den = series_inner_product(Xc[:-1], Xc[:-1])
    if den <= DENOM_TOL:
        raise DegenerateSeries("centralized series is uniform; composition never changes")
    return series_inner_product(Xc[1:], Xc[:-1]) / den


def sse(Xc, beta: float) -> float:
    """Aitchison sum of squared one-step residuals for a given β."""
    Xc = np.atleast_2d(_as_array(Xc))
    return float(np.sum(distance(Xc[1:], power(beta, Xc[:-1])) ** 2))


def fit(X0, B: AccumulationMatrix | np.ndarray) -> GadgmssFit:
    """Fit GADGMSS to a training series.

    Fitted values are one-step predictions from the observed accumulated
    predecessors; the first fitted row equals the first observation.
    """
    x0 = np.atleast_2d(closure(_as_array(X0)))
    if not isinstance(B, AccumulationMatrix):
        B = AccumulationMatrix(B)
    n = x0.shape[0]
    if n < 3:
        raise DegenerateSeries(f"GADGMSS needs at least 3 observations, got {n}")
    if B.n != n:
        raise DimensionMismatch(f"B has size {B.n} but series has {n} rows")
    # accumulation would turn a constant series into a spurious trend
    if np.max(distance(x0, x0[:1])) <= CONSTANT_TOL:
        raise DegenerateSeries("composition never changes over the training window")

    x1 = accumulate(B, x0)
    c = center(x1)
    xc = centralize(x1)
    beta = estimate_beta1(xc)
    pred_c = power(beta, xc[:-1])
    x1_hat = np.vstack([x1[:1], decentralize(pred_c, c)])
    fitted = deaccumulate(B, x1_hat)
    return GadgmssFit(
        beta1=float(beta),
        center=c,
        B=B,
        fitted=fitted,
        sse=float(np.sum(distance(xc[1:], pred_c) ** 2)),
        accumulated=x1,
        centered=xc,
        fitted_accumulated=x1_hat,
    )


def forecast(fit: GadgmssFit, h: int, extension: str = "level") -> np.ndarray:
    """``h`` steps beyond the training window, shape ``(h, D)``.

    The centred state is iterated from the last observed accumulated row,
    de-centred, and de-accumulated through ``B`` grown by ``extension``
    (see :func:`~simplexgrey.accumulation.extend_for_forecast`).
    """
    D = fit.fitted.shape[1]
    if h <= 0:
        return np.empty((0, D))
    steps = fit.beta1 ** np.arange(1, h + 1)
    future_c = power(steps, np.repeat(fit.centered[-1:], h, axis=0))
    future1 = decentralize(future_c, fit.center)
    Bx = extend_for_forecast(fit.B, h, extension)
    full = deaccumulate(Bx, np.vstack([fit.fitted_accumulated, future1]))
    return full[fit.n:]


def verify_theorem2(fit: GadgmssFit, X=None) -> float:
    """Largest violation of ``log(ẋ_j/ẋ_j')(k+1) = β̂₁ log(ẋ_j/ẋ_j')(k)``.

    Evaluated on the centred accumulated observations (of ``X`` if given, else
    the training data).  Zero up to rounding when the data follow the model.
    """
    if X is None:
        xc = fit.centered
    else:
        xc = centralize(accumulate(fit.B, closure(np.atleast_2d(_as_array(X)))))
    lx = np.log(xc)
    ratios = lx[:, :, None] - lx[:, None, :]
    return float(np.max(np.abs(ratios[1:] - fit.beta1 * ratios[:-1])))


def fitting_cvpe_batch(U0: np.ndarray, Bs: np.ndarray) -> np.ndarray:
    """Fitting CVPE of GADGMSS for a stack of candidate matrices.

    Works directly on ilr coordinates ``U0`` (``n x (D-1)``), where the
    simplex pipeline is linear, so a whole DE population is scored with a few
    batched array operations.  Candidates with a degenerate centred series get
    ``inf``.
    """
    U1 = Bs @ U0
    m = U1.mean(axis=1, keepdims=True)
    C = U1 - m
    den = np.sum(C[:, :-1] ** 2, axis=(1, 2))
    num = np.sum(C[:, 1:] * C[:, :-1], axis=(1, 2))
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = num / den
    fit1 = np.concatenate([U1[:, :1], beta[:, None, None] * C[:, :-1] + m], axis=1)
    bad = ~(den > DENOM_TOL) | ~np.isfinite(beta)
    fit1[bad] = 0.0
    U0_hat = np.linalg.solve(Bs, fit1)
    err = np.sum((U0_hat - U0) ** 2, axis=(1, 2)) / np.sum(U0 ** 2)
    err[bad] = np.inf
    return err


def fitting_cvpe(X0, B) -> float:
    """Scalar counterpart of :func:`fitting_cvpe_batch` for one matrix."""
    U0 = ilr(np.atleast_2d(_as_array(X0)))
    Bm = B.matrix if isinstance(B, AccumulationMatrix) else np.asarray(B, dtype=float)
    return float(fitting_cvpe_batch(U0, Bm[None])[0])

