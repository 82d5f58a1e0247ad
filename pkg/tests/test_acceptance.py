"""Acceptance criteria, one PASS/FAIL line each.

Criteria 1-5 are deterministic property suites.  Criteria 6-10 compare
against published numbers; the DE search is run with seeds 0-9 and the run
with the lowest fitting CVPE is kept (selection never looks at test data or
at the published targets).
"""
from functools import lru_cache

import numpy as np
import pytest

from simplexgrey import gadgmss
from simplexgrey.accumulation import (AccumulationMatrix, accumulate, deaccumulate,
                                      standard_ago)
from simplexgrey.data import SplitSpec, load_dataset, split, to_compositions
from simplexgrey.de import DeConfig, differential_evolution, optimize_b
from simplexgrey.ilr import ilr, ilr_inv
from simplexgrey.pipeline import run
from simplexgrey.simplex import (center, centralize, closure, decentralize, distance,
                                 inner_product, perturb, power, uniform)
from simplexgrey.tgmi import fit_gm11, fit_tgmi, forecast_tgmi

SEEDS = range(10)
TRACES = []


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} | {detail}")
        assert ok, detail
    return emit


def rand_comp(rng, size):
    return closure(np.exp(rng.normal(scale=1.5, size=size)))


# ---------------------------------------------------------------- 1 to 5

def test_c1_property_laws(report):
    rng = np.random.default_rng(2024)
    worst = dict(algebra=0.0, bilinear=0.0, isometry=0.0, ilr_roundtrip=0.0,
                 accumulation=0.0, centring=0.0)
    for _ in range(500):
        D = int(rng.integers(2, 7))
        x, y, z = (rand_comp(rng, D) for _ in range(3))
        a, b = rng.uniform(-3, 3, 2)
        worst["algebra"] = max(
            worst["algebra"],
            distance(perturb(perturb(x, y), z), perturb(x, perturb(y, z))),
            distance(perturb(x, y), perturb(y, x)),
            distance(power(a, power(b, x)), power(a * b, x)),
            distance(power(a, perturb(x, y)), perturb(power(a, x), power(a, y))))
        worst["bilinear"] = max(worst["bilinear"], abs(
            inner_product(perturb(power(a, x), y), z)
            - a * inner_product(x, z) - inner_product(y, z)))
        worst["isometry"] = max(worst["isometry"],
                                abs(ilr(x) @ ilr(y) - inner_product(x, y)),
                                abs(np.linalg.norm(ilr(x) - ilr(y)) - distance(x, y)))
        v = rng.normal(scale=3, size=D - 1)
        worst["ilr_roundtrip"] = max(worst["ilr_roundtrip"],
                                     np.max(np.abs(ilr_inv(ilr(x)) - x)),
                                     np.max(np.abs(ilr(ilr_inv(v)) - v)))
        n = int(rng.integers(2, 10))
        X = rand_comp(rng, (n, D))
        Bm = np.tril(rng.uniform(-1, 1, (n, n)))
        Bm[np.diag_indices(n)] = rng.uniform(0.2, 1.5, n)
        B = AccumulationMatrix(Bm)
        worst["accumulation"] = max(worst["accumulation"],
                                    np.max(distance(deaccumulate(B, accumulate(B, X)), X)))
        worst["centring"] = max(worst["centring"],
                                np.max(distance(decentralize(centralize(X), center(X)), X)),
                                distance(center(centralize(X)), uniform(D)))
    limits = dict(algebra=1e-10, bilinear=1e-9, isometry=1e-9, ilr_roundtrip=1e-10,
                  accumulation=1e-9, centring=1e-10)
    ok = all(worst[k] <= limits[k] for k in limits)
    detail = ", ".join(f"{k} {worst[k]:.1e}<={limits[k]:.0e}" for k in limits)
    report(1, "algebra, ilr, accumulation and centring laws (500 cases each)", ok, detail)


def test_c2_ols_matches_grid(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        n, D = int(rng.integers(3, 11)), int(rng.integers(2, 6))
        Xc = centralize(rand_comp(rng, (n, D)))
        beta = gadgmss.estimate_beta1(Xc)
        grid = np.round(np.arange(-1000, 1001) * 1e-3, 3) + beta
        sse = [gadgmss.sse(Xc, b) for b in grid]
        worst = max(worst, abs(grid[int(np.argmin(sse))] - beta))
    report(2, "least-squares beta equals grid-search minimiser", worst <= 1e-3,
           f"max |grid argmin - beta| = {worst:.1e} (tol 1e-3, 100 series)")


def _gm11_response(a, b, u1, total):
    k = np.arange(total)
    return np.diff((u1 - b / a) * np.exp(-a * k) + b / a, prepend=0.0)


def test_c3_exact_model_recovery(report):
    rng = np.random.default_rng(3)
    g_beta = g_fit = g_fc = 0.0
    for n, D in [(4, 2), (6, 3), (8, 4), (10, 5)]:
        # centring forces the exact model to beta = -1 with n even
        m, c = rng.normal(size=D - 1), rng.normal(size=D - 1)
        U1 = m + ((-1.0) ** np.arange(n + 4))[:, None] * c
        X = ilr_inv(np.diff(U1, axis=0, prepend=0.0))
        fit = gadgmss.fit(X[:n], standard_ago(n))
        g_beta = max(g_beta, abs(fit.beta1 + 1))
        g_fit = max(g_fit, np.max(distance(fit.fitted, X[:n])))
        g_fc = max(g_fc, np.max(distance(gadgmss.forecast(fit, 4, "unit"), X[n:])))

    t_param = t_traj = 0.0
    for D in (2, 3, 4):
        n, h = 8, 3
        a = rng.uniform(0.05, 0.2, D - 1) * rng.choice([-1, 1], D - 1)
        b, u1 = rng.normal(size=D - 1), rng.normal(size=D - 1)
        U = np.column_stack([_gm11_response(a[i], b[i], u1[i], n + h) for i in range(D - 1)])
        X = ilr_inv(U)
        tf = fit_tgmi(X[:n])
        t_param = max(t_param, *(max(abs(p.a - a[i]), abs(p.b - b[i]))
                                 for i, p in enumerate(tf.models)))
        t_traj = max(t_traj, np.max(distance(tf.fitted, X[:n])),
                     np.max(distance(forecast_tgmi(tf, h), X[n:])))

    # diagnostic only: data obeying the discrete grey equation pins (a, b) exactly
    g_eq = 0.0
    for a, b, u1 in [(0.2, 1.0, 2.0), (-0.1, -0.5, 0.3), (0.05, 3.0, -1.0)]:
        u = [u1]
        for _ in range(7):
            u.append((b - a * sum(u)) / (1 + a / 2))
        p = fit_gm11(np.array(u))
        g_eq = max(g_eq, abs(p.a - a), abs(p.b - b))

    ok = max(g_beta, g_fit, g_fc) <= 1e-8 and max(t_param, t_traj) <= 1e-6
    detail = (f"GADGMSS beta err {g_beta:.1e}, fit {g_fit:.1e}, forecast {g_fc:.1e} (tol 1e-8); "
              f"TGMI param err {t_param:.1e}, trajectory {t_traj:.1e} (tol 1e-6); "
              f"grey-equation data param err {g_eq:.1e}")
    report(3, "exact-model recovery", ok, detail)


def test_c4_scalar_cross_check(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        n, h = int(rng.integers(3, 12)), 4
        X = rand_comp(rng, (n, 2))
        fit = gadgmss.fit(X, standard_ago(n))
        u1 = np.cumsum(ilr(X)[:, 0])
        mean = u1.mean()
        c = u1 - mean
        beta = c[1:] @ c[:-1] / (c[:-1] @ c[:-1])
        path = np.concatenate([[u1[0]], beta * c[:-1] + mean,
                               c[-1] * beta ** np.arange(1, h + 1) + mean])
        ref = np.diff(path, prepend=0.0)
        got = np.concatenate([ilr(fit.fitted)[:, 0],
                              ilr(gadgmss.forecast(fit, h, "unit"))[:, 0]])
        worst = max(worst, abs(fit.beta1 - beta), np.max(np.abs(got - ref)))
    report(4, "D=2 scalar recursion cross-check", worst <= 1e-9,
           f"max deviation {worst:.1e} (tol 1e-9, 200 series)")


def test_c5_de_sanity(report, dataset_runs):
    cfg = DeConfig(pop_size=50, generations=2000, seed=0)
    _, trace = differential_evolution(lambda p: np.sum(p ** 2, axis=-1), -5 * np.ones(10),
                                      5 * np.ones(10), cfg, vectorized=True)
    traces = [trace.best_fitness] + [t.best_fitness for t in TRACES]
    monotone = all(np.all(np.diff(t) <= 0) for t in traces)
    ok = trace.best_fitness[-1] < 1e-6 and monotone
    report(5, "DE sphere test and monotone traces", ok,
           f"sphere best {trace.best_fitness[-1]:.1e} after {len(trace.best_fitness) - 1} "
           f"generations (tol 1e-6); {len(traces)} traces monotone: {monotone}")


# ---------------------------------------------------------------- 6 to 10

@lru_cache(maxsize=None)
def best_run(name, train_len, horizon):
    X = to_compositions(load_dataset(name))
    train, test = split(X, SplitSpec(train_len, X.n - train_len))
    best = None
    for seed in SEEDS:
        B, trace = optimize_b(train.values, DeConfig(seed=seed))
        TRACES.append(trace)
        if best is None or trace.best_fitness[-1] < best[1]:
            best = (B, trace.best_fitness[-1], seed)
    res = run(train, "igadgm", horizon, test=test if test.n else None, B=best[0])
    res.seed = best[2]
    return res


@pytest.fixture(scope="module")
def dataset_runs():
    return {
        "canada": best_run("canada", 8, 2),
        "india": best_run("india", 7, 3),
        "china64": best_run("china", 6, 4),
        "china": best_run("china", 10, 6),
    }


def within(value, target, tol):
    return abs(value - target) <= tol


def test_c6_canada(report, dataset_runs):
    r = dataset_runs["canada"]
    beta, df = r.gadgmss.beta1, r.df
    pred = r.report("igadgm", "prediction").cvpe
    ok = within(beta, 0.537, 0.05) and within(df, 0.5882, 0.05) and pred <= 0.35
    report(6, "Canada 8/2 beta, DF and IGADGM prediction CVPE", ok,
           f"seed {r.seed}: beta {beta:.3f} (0.537+-0.05), DF {df:.4f} (0.5882+-0.05), "
           f"CVPE {pred:.3f} (<=0.35)")


def test_c7_india(report, dataset_runs):
    r = dataset_runs["india"]
    beta, df = r.gadgmss.beta1, r.df
    pred = r.report("igadgm", "prediction").cvpe
    ok = within(beta, 0.476, 0.05) and within(df, 0.6135, 0.05) and pred <= 0.10
    report(7, "India 7/3 beta, DF and IGADGM prediction CVPE", ok,
           f"seed {r.seed}: beta {beta:.3f} (0.476+-0.05), DF {df:.4f} (0.6135+-0.05), "
           f"CVPE {pred:.3f} (<=0.10)")


def test_c8_china_64(report, dataset_runs):
    r = dataset_runs["china64"]
    beta, df = r.gadgmss.beta1, r.df
    ok = within(beta, 0.521, 0.05) and within(df, 0.5998, 0.05)
    report(8, "China 6/4 beta and DF", ok,
           f"seed {r.seed}: beta {beta:.3f} (0.521+-0.05), DF {df:.4f} (0.5998+-0.05)")


def test_c9_china_forecast(report, dataset_runs):
    r = dataset_runs["china"]
    fc = r.forecast["igadgm"]
    names = r.train.names
    arctic, me = fc[:, names.index("Arctic nations")], fc[:, names.index("Middle east")]
    ok = (0.18 <= arctic[5] <= 0.27 and arctic[5] > arctic[1]
          and 0.37 <= me[5] <= 0.47 and me[5] < me[0])
    report(9, "China 2020-2025 forecast trends", ok,
           f"seed {r.seed}: Arctic 2021 {arctic[1]:.3f} -> 2025 {arctic[5]:.3f} "
           f"(2025 in [0.18,0.27], rising); Middle east 2020 {me[0]:.3f} -> 2025 {me[5]:.3f} "
           f"(2025 in [0.37,0.47], falling)")


def test_c10_error_ranking(report, dataset_runs):
    ca, ind = dataset_runs["canada"], dataset_runs["india"]
    c = {m: ca.report(m, "prediction") for m in ("gadgmss", "tgmi", "igadgm")}
    canada_ok = all(c["igadgm"].cvpe <= c[m].cvpe and c["igadgm"].mcpe <= c[m].mcpe
                    for m in ("gadgmss", "tgmi"))
    i = {m: ind.report(m, "prediction").cvpe for m in ("gadgmss", "tgmi", "igadgm")}
    gap = i["igadgm"] - min(i["gadgmss"], i["tgmi"])
    ok = canada_ok and gap <= 0.01
    report(10, "error-table ranking", ok,
           "Canada CVPE/MCPE " + ", ".join(f"{m} {c[m].cvpe:.3f}/{c[m].mcpe:.3f}" for m in c)
           + f" (IGADGM smallest: {canada_ok}); India IGADGM {i['igadgm']:.3f} vs best single "
           f"{min(i['gadgmss'], i['tgmi']):.3f}, gap {gap:.3f} (<=0.01)")
