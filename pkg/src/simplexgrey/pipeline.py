"""Fit, fuse, forecast and score the three models on one training window."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gadgmss
from .accumulation import AccumulationMatrix
from .de import DeConfig, DeTrace, optimize_b_restarts
from .errors import DimensionMismatch
from .fusion import weights
from .metrics import ErrorReport, cvpe, evaluate
from .simplex import CompositionSeries, perturb, power
from .tgmi import TgmiFit, fit_tgmi, forecast_tgmi

MODELS = ("gadgmss", "tgmi", "igadgm")


@dataclass
class PipelineResult:
    model: str
    train: CompositionSeries
    horizon: int
    B: AccumulationMatrix | None = None
    trace: DeTrace | None = None
    seed: int | None = None
    gadgmss: gadgmss.GadgmssFit | None = None
    tgmi: TgmiFit | None = None
    df: float | None = None
    weight_gadgmss: float | None = None
    weight_tgmi: float | None = None
    fitted: dict = field(default_factory=dict)
    forecast: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def forecast_series(self, name: str) -> CompositionSeries:
        return CompositionSeries(self.forecast[name], continue_labels(self.train.labels, self.horizon),
                                 self.train.names)

    def report(self, name: str, phase: str) -> ErrorReport:
        for r in self.reports:
            if r.model == name and r.phase == phase:
                return r
        raise KeyError((name, phase))


def continue_labels(labels, h: int) -> tuple:
    """Time labels for ``h`` steps after ``labels``.

    Integer labels continue with their last step; anything else gets ``+k``.
    """
    if h <= 0:
        return ()
    try:
        nums = [int(s) for s in labels[-2:]]
    except ValueError:
        return tuple(f"{labels[-1]}+{k}" for k in range(1, h + 1))
    step = nums[-1] - nums[-2] if len(nums) == 2 and nums[-1] != nums[-2] else 1
    return tuple(str(nums[-1] + step * k) for k in range(1, h + 1))


def _blend(xs, xt, ws, wt):
    if xs.shape[0] == 0 or wt == 0.0:
        return xs.copy()
    return perturb(power(ws, xs), power(wt, xt))


def run(train: CompositionSeries, model: str = "igadgm", horizon: int = 0,
        de: DeConfig = DeConfig(), restarts: int = 1, extension: str = "level",
        test: CompositionSeries | None = None, formula: str = "difference",
        B: AccumulationMatrix | None = None) -> PipelineResult:
    """Fit ``model`` on ``train`` and forecast ``horizon`` steps.

    ``igadgm`` fits both single models and reports all three.  Fusion weights
    always come from the difference-form fitting CVPE, whatever ``formula``
    the reports use.  When ``test`` is given its length must equal
    ``horizon`` and prediction-phase reports are added.  A given ``B`` is
    used as is and the DE search is skipped.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    res = PipelineResult(model, train, horizon)
    X = train.values
    names = []

    if model in ("gadgmss", "igadgm"):
        if B is None:
            res.B, res.trace, res.seed = optimize_b_restarts(X, de, restarts)
        elif B.n != train.n:
            raise DimensionMismatch(f"B has size {B.n} but the training window has {train.n} rows")
        else:
            res.B = B
        res.gadgmss = gadgmss.fit(X, res.B)
        res.fitted["gadgmss"] = res.gadgmss.fitted
        res.forecast["gadgmss"] = gadgmss.forecast(res.gadgmss, horizon, extension)
        names.append("gadgmss")
    if model in ("tgmi", "igadgm"):
        res.tgmi = fit_tgmi(X)
        res.fitted["tgmi"] = res.tgmi.fitted
        res.forecast["tgmi"] = forecast_tgmi(res.tgmi, horizon)
        names.append("tgmi")
    if model == "igadgm":
        ds = cvpe(X, res.fitted["gadgmss"])
        dt = cvpe(X, res.fitted["tgmi"])
        res.df, res.weight_gadgmss, res.weight_tgmi = weights(ds, dt)
        for part in ("fitted", "forecast"):
            d = getattr(res, part)
            d["igadgm"] = _blend(d["gadgmss"], d["tgmi"], res.weight_gadgmss, res.weight_tgmi)
        names.append("igadgm")

    for name in names:
        res.reports.append(evaluate(X, res.fitted[name], name, "fitting", formula))
    if test is not None:
        if test.n != horizon:
            raise ValueError("test length must equal the horizon")
        for name in names:
            res.reports.append(evaluate(test.values, res.forecast[name], name, "prediction", formula))
    return res


def summary(res: PipelineResult) -> dict:
    """JSON-ready view of a run (model artifacts and error reports)."""
    out = {"model": res.model, "train_labels": list(res.train.labels),
           "parts": list(res.train.names), "horizon": res.horizon}
    if res.gadgmss is not None:
        out["gadgmss"] = {
            "beta1": res.gadgmss.beta1,
            "center": res.gadgmss.center.tolist(),
            "B": res.B.rows(),
        }
        if res.trace is not None:
            out["gadgmss"].update(de_seed=res.seed, de_best_fitness=res.trace.best_fitness[-1],
                                  de_generations_run=len(res.trace.best_fitness) - 1)
    if res.tgmi is not None:
        out["tgmi"] = {"coordinates": [m.to_dict() for m in res.tgmi.models],
                       "degenerate": res.tgmi.degenerate}
    if res.df is not None:
        out["fusion"] = {"df": res.df, "weight_gadgmss": res.weight_gadgmss,
                         "weight_tgmi": res.weight_tgmi}
    out["fitted"] = {k: np.asarray(v).tolist() for k, v in res.fitted.items()}
    out["forecast"] = {k: np.asarray(v).tolist() for k, v in res.forecast.items()}
    out["errors"] = [r.to_dict() for r in res.reports]
    return out
