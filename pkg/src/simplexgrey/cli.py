"""Command-line interface: ``simplexgrey {fit,evaluate,forecast}``.

All results are computed in memory first and written only when the run
succeeds, so a failing command leaves no partial output behind.  Exit codes:
0 success, 2 configuration error, 3 data error, 4 numerical degeneracy.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .accumulation import EXTENSIONS, AccumulationMatrix
from .data import (DATASETS, SplitSpec, load_dataset, parse_split, read_table, split,
                   to_compositions, write_series_csv)
from .de import UPDATING, DeConfig
from .errors import BadSplit, ConfigError, DataError, SimplexGreyError
from .metrics import FORMULAS
from .pipeline import MODELS, continue_labels, run, summary
from .simplex import CompositionSeries


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None
    dataset: str | None
    split: str | None
    model: str
    horizon: int
    seed: int
    generations: int
    pop: int
    restarts: int
    updating: str
    cvpe_formula: str
    extension: str
    b_matrix: str | None
    out: str

    def de_config(self) -> DeConfig:
        return DeConfig(pop_size=self.pop, generations=self.generations, seed=self.seed,
                        updating=self.updating)

    def to_dict(self) -> dict:
        return asdict(self)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simplexgrey",
                                description="Grey forecasting of composition time series.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV table: 'region' column, then one column per time step")
    src.add_argument("--dataset", choices=DATASETS, help="use a bundled dataset")
    common.add_argument("--split", help="TRAIN/TEST lengths, e.g. 8/2 (default: all data for training)")
    common.add_argument("--model", choices=MODELS, default="igadgm")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--generations", type=int, default=200)
    common.add_argument("--pop", type=int, default=50)
    common.add_argument("--restarts", type=int, default=1,
                        help="DE runs with consecutive seeds; the best fit is kept")
    common.add_argument("--updating", choices=UPDATING, default="immediate",
                        help="DE replacement schedule")
    common.add_argument("--cvpe-formula", choices=FORMULAS, default="difference")
    common.add_argument("--extension", choices=EXTENSIONS, default="level",
                        help="how B is grown past the training window when forecasting")
    common.add_argument("--b-matrix", help="JSON accumulation matrix to use instead of a DE search")
    common.add_argument("--out", required=True, help="output directory")

    sub.add_parser("fit", parents=[common], help="fit and report fitting errors")
    sub.add_parser("evaluate", parents=[common], help="fit on the train part, score on the test part")
    fc = sub.add_parser("forecast", parents=[common], help="forecast past the training window")
    fc.add_argument("--horizon", type=int, default=0)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig(
        command=args.command, input=args.input, dataset=args.dataset, split=args.split,
        model=args.model, horizon=getattr(args, "horizon", 0), seed=args.seed,
        generations=args.generations, pop=args.pop, restarts=args.restarts, updating=args.updating,
        cvpe_formula=args.cvpe_formula, extension=args.extension, b_matrix=args.b_matrix,
        out=args.out)
    if cfg.horizon < 0:
        raise ConfigError("horizon cannot be negative")
    if cfg.restarts < 1:
        raise ConfigError("restarts must be at least 1")
    cfg.de_config()  # validates DE settings
    if cfg.split is not None:
        parse_split(cfg.split)
    return cfg


def _load(cfg: RunConfig) -> CompositionSeries:
    table = load_dataset(cfg.dataset) if cfg.dataset else read_table(cfg.input)
    return to_compositions(table)


def _load_b(path) -> AccumulationMatrix:
    try:
        return AccumulationMatrix.from_json(path)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    except (ValueError, KeyError, TypeError) as exc:
        raise DataError(f"{path}: not an accumulation matrix ({exc})") from exc


def _csv_text(series: CompositionSeries) -> str:
    buf = io.StringIO()
    write_series_csv(buf, series)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _errors_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", "phase", "cvpe", "mcpe", "mape", "skipped"])
    for r in reports:
        w.writerow([r.model, r.phase, "%.12g" % r.cvpe, "%.12g" % r.mcpe, "%.12g" % r.mape, r.skipped])
    return buf.getvalue()


def _plot_csv(X: CompositionSeries, res) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["year", "region", "share", "model"])
    for k, lab in enumerate(X.labels):
        for j, name in enumerate(X.names):
            w.writerow([lab, name, "%.12g" % X.values[k, j], "observed"])
    labels = continue_labels(res.train.labels, res.horizon)
    for model, values in res.forecast.items():
        for k, lab in enumerate(labels):
            for j, name in enumerate(X.names):
                w.writerow([lab, name, "%.12g" % values[k, j], model])
    return buf.getvalue()


def _artifacts(res, files: dict) -> None:
    for name, values in res.fitted.items():
        files[f"fitted_{name}.csv"] = _csv_text(res.train.replace(values))
    if res.trace is not None:
        files["B.json"] = _json_text({"n": res.B.n, "rows": res.B.rows()})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["generation", "best_fitness"])
        for g, f in enumerate(res.trace.best_fitness):
            w.writerow([g, repr(f)])
        files["trace.csv"] = buf.getvalue()


def execute(cfg: RunConfig) -> dict:
    """Run one command and return ``{filename: text}`` without touching disk."""
    X = _load(cfg)
    plan = parse_split(cfg.split) if cfg.split else SplitSpec(X.n, 0)
    train, test = split(X, plan)
    B = _load_b(cfg.b_matrix) if cfg.b_matrix else None
    files = {}
    if cfg.command == "evaluate":
        if plan.test_len < 1:
            raise BadSplit("evaluate needs at least one test step")
        res = run(train, cfg.model, plan.test_len, cfg.de_config(), cfg.restarts,
                  cfg.extension, test, cfg.cvpe_formula, B)
        files["errors.csv"] = _errors_csv(res.reports)
        for name in res.forecast:
            files[f"predicted_{name}.csv"] = _csv_text(res.forecast_series(name))
    elif cfg.command == "forecast":
        res = run(train, cfg.model, cfg.horizon, cfg.de_config(), cfg.restarts,
                  cfg.extension, None, cfg.cvpe_formula, B)
        for name in res.forecast:
            files[f"forecast_{name}.csv"] = _csv_text(res.forecast_series(name))
        files["plot.csv"] = _plot_csv(X, res)
    else:
        res = run(train, cfg.model, 0, cfg.de_config(), cfg.restarts,
                  cfg.extension, None, cfg.cvpe_formula, B)
        files["errors.csv"] = _errors_csv(res.reports)
    _artifacts(res, files)
    report = summary(res)
    if cfg.command == "fit":
        report.pop("forecast")
    report["config"] = cfg.to_dict()
    files["report.json"] = _json_text(report)
    return files


def write_outputs(out: str, files: dict) -> None:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        (path / name).write_text(files[name], encoding="utf-8")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        files = execute(cfg)
        write_outputs(cfg.out, files)
    except SimplexGreyError as exc:
        print(f"simplexgrey: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"simplexgrey: error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(files)} files to {cfg.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
