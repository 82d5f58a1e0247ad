"""Grey forecasting of composition time series in the Aitchison simplex."""

__version__ = "0.1.0"

from .accumulation import (AccumulationMatrix, accumulate, deaccumulate,
                           extend_for_forecast, identity, standard_ago)
from .data import (RawImportTable, SplitSpec, aggregate, load_dataset, parse_split,
                   read_table, split, to_compositions, write_series_csv)
from .de import (DeConfig, DeTrace, decode, differential_evolution, encode, optimize_b,
                 optimize_b_restarts)
from .errors import *  # noqa: F401,F403
from .fusion import FusionResult, fuse, weights
from .gadgmss import GadgmssFit, estimate_beta1, fit, fitting_cvpe, forecast, verify_theorem2
from .ilr import IlrBasis, ilr, ilr_inv, ilr_series, ilr_series_inv, make_basis
from .metrics import ErrorReport, cvpe, evaluate, mape, mcpe
from .simplex import (CompositionSeries, center, centralize, closure, clr, clr_inv,
                      decentralize, distance, inner_product, norm, perturb, power)
from .tgmi import Gm11Params, TgmiFit, fit_gm11, fit_tgmi, forecast_tgmi, predict_gm11
