"""Error-weighted blending of GADGMSS and TGMI (IGADGM)."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BothErrorsZero, DimensionMismatch
from .simplex import _as_array, closure, perturb, power

ZERO_SUM = 1e-15


@dataclass(frozen=True)
class FusionResult:
    df: float
    weight_gadgmss: float
    weight_tgmi: float
    blended: np.ndarray

    def to_dict(self) -> dict:
        return {
            "df": self.df,
            "weight_gadgmss": self.weight_gadgmss,
            "weight_tgmi": self.weight_tgmi,
            "blended": self.blended.tolist(),
        }


def weights(delta_s: float, delta_t: float) -> tuple[float, float, float]:
    """Return ``(df, weight_gadgmss, weight_tgmi)`` from the two fitting errors.

    Each model is weighted by the *other* model's error; the determination
    factor ``df = δ_S / (δ_T + δ_S)`` is the weight carried by TGMI.
    """
    if delta_s < 0 or delta_t < 0:
        raise ValueError("fitting errors must be non-negative")
    total = delta_s + delta_t
    if total <= ZERO_SUM:
        warnings.warn("both fitting errors are zero; using GADGMSS alone", BothErrorsZero,
                      stacklevel=3)
        return 0.5, 1.0, 0.0
    return delta_s / total, delta_t / total, delta_s / total


def fuse(xs, xt, delta_s: float, delta_t: float) -> FusionResult:
    """``(δ_T/Σ) ⊗ xs ⊕ (δ_S/Σ) ⊗ xt`` row by row."""
    xs = np.atleast_2d(closure(_as_array(xs)))
    xt = np.atleast_2d(closure(_as_array(xt)))
    if xs.shape != xt.shape:
        raise DimensionMismatch(f"cannot fuse series of shapes {xs.shape} and {xt.shape}")
    df, ws, wt = weights(delta_s, delta_t)
    if wt == 0.0:
        blended = xs.copy()
    else:
        blended = perturb(power(ws, xs), power(wt, xt))
    return FusionResult(df, ws, wt, blended)
