"""Relative error metrics for composition series, computed in ilr coordinates.

``cvpe``  series-level relative squared error ``‖Û − U‖² / ‖U‖²``
``mcpe``  mean over rows of the same ratio
``mape``  mean absolute relative error over (row, coordinate) pairs

``formula="literal"`` switches CVPE/MCPE to the raw inner-product ratio
``⟨U, Û⟩ / ⟨U, U⟩``, which is 1 rather than 0 for a perfect prediction.  It is
kept only for comparison with published tables.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import AllCoordinatesSkipped, DimensionMismatch, ZeroReference
from .ilr import ilr
from .simplex import _as_array

ZERO_REF = 1e-12
MAPE_SKIP = 1e-9
FORMULAS = ("difference", "literal")


def _coords(truth, pred):
    T = np.atleast_2d(ilr(np.atleast_2d(_as_array(truth))))
    P = np.atleast_2d(ilr(np.atleast_2d(_as_array(pred))))
    if T.shape != P.shape:
        raise DimensionMismatch(f"series shapes differ: {T.shape} vs {P.shape}")
    return T, P


def _check_formula(formula):
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose from {FORMULAS}")


def cvpe(truth, pred, formula: str = "difference") -> float:
    _check_formula(formula)
    T, P = _coords(truth, pred)
    ref = np.sum(T * T)
    if np.sqrt(ref) < ZERO_REF:
        raise ZeroReference("reference series is uniform")
    num = np.sum(T * P) if formula == "literal" else np.sum((P - T) ** 2)
    return float(num / ref)


def mcpe(truth, pred, formula: str = "difference") -> float:
    _check_formula(formula)
    T, P = _coords(truth, pred)
    ref = np.sum(T * T, axis=1)
    if np.any(np.sqrt(ref) < ZERO_REF):
        raise ZeroReference("a reference row is uniform")
    num = np.sum(T * P, axis=1) if formula == "literal" else np.sum((P - T) ** 2, axis=1)
    return float(np.mean(num / ref))


def mape_with_skips(truth, pred) -> tuple[float, int]:
    """MAPE plus the number of near-zero reference coordinates left out."""
    T, P = _coords(truth, pred)
    keep = np.abs(T) >= MAPE_SKIP
    if not keep.any():
        raise AllCoordinatesSkipped("every reference ilr coordinate is ~0")
    value = np.mean(np.abs((P[keep] - T[keep]) / T[keep]))
    return float(value), int((~keep).sum())


def mape(truth, pred) -> float:
    return mape_with_skips(truth, pred)[0]


@dataclass(frozen=True)
class ErrorReport:
    model: str
    phase: str
    cvpe: float
    mcpe: float
    mape: float
    skipped: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate(truth, pred, model: str, phase: str, formula: str = "difference") -> ErrorReport:
    m, skipped = mape_with_skips(truth, pred)
    return ErrorReport(model, phase, cvpe(truth, pred, formula), mcpe(truth, pred, formula),
                       m, skipped)
