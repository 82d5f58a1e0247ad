"""Differential evolution (DE/best/1/bin) and its use for choosing ``B``.

Two replacement schedules are offered.  ``"immediate"`` (the default) scores
each trial as soon as it is built and lets it replace its target, and update
the best member, before the next trial is drawn.  ``"deferred"`` builds a whole
generation from the population as it stood at the start, scores it in one
batch and then applies greedy replacement in index order, so a batch or
parallel objective gives the same run as a serial one.  Deferred updating
collapses the population early with best/1 mutation, so it is opt-in.
"""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import gadgmss
from .accumulation import DIAG_FLOOR, AccumulationMatrix, standard_ago
from .errors import ConfigError, DegenerateSeries, LengthMismatch
from .ilr import ilr
from .simplex import _as_array, closure

UPDATING = ("immediate", "deferred")


@dataclass(frozen=True)
class DeConfig:
    pop_size: int = 50
    generations: int = 200
    scale_factor: float = 0.5
    crossover_rate: float = 0.9
    tol: float = 1e-12
    seed: int = 0
    lower: float = 1e-3
    upper: float = 1.0
    diag_lower: float = 0.1
    updating: str = "immediate"

    def __post_init__(self):
        if self.pop_size < 4:
            raise ConfigError("population must have at least 4 members")
        if self.generations < 0:
            raise ConfigError("generations must be non-negative")
        if not 0 < self.crossover_rate <= 1:
            raise ConfigError("crossover rate must lie in (0, 1]")
        if self.scale_factor <= 0:
            raise ConfigError("scale factor must be positive")
        if not self.lower < self.upper or not self.diag_lower < self.upper:
            raise ConfigError("lower bounds must be below the upper bound")
        if self.updating not in UPDATING:
            raise ConfigError(f"updating must be one of {UPDATING}")
        if self.diag_lower < DIAG_FLOOR:
            raise ConfigError(f"diagonal lower bound must be at least {DIAG_FLOOR}")

    def bounds(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-entry bounds for the packed lower triangle of an ``n x n`` matrix."""
        rows, cols = np.tril_indices(n)
        lo = np.where(rows == cols, self.diag_lower, self.lower)
        return lo.astype(float), np.full(lo.size, self.upper)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class DeTrace:
    best_fitness: list = field(default_factory=list)
    best_vector: np.ndarray | None = None

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["generation", "best_fitness"])
            for g, f in enumerate(self.best_fitness):
                w.writerow([g, repr(float(f))])


def differential_evolution(func, lower, upper, cfg: DeConfig = DeConfig(), init=None,
                           vectorized: bool = False, updating: str = "immediate"):
    """Minimise ``func`` inside a box with DE/best/1/bin.

    Parameters
    ----------
    func : callable
        Objective.  With ``vectorized=True`` it receives an ``(m, d)`` array and
        returns ``m`` values, otherwise one vector at a time.
    lower, upper : array_like
        Box bounds; mutants leaving the box are clamped to it.
    init : array_like, optional
        Rows placed at the front of the initial population (after clamping).
    updating : {"immediate", "deferred"}
        Replacement schedule, see the module docstring.

    Returns
    -------
    best : ndarray
    trace : DeTrace
        Best fitness after initialisation and after every generation.
    """
    if updating not in UPDATING:
        raise ConfigError(f"updating must be one of {UPDATING}")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    d = lower.size
    M = cfg.pop_size
    rng = np.random.default_rng(cfg.seed)

    def score(pop):
        if vectorized:
            return np.asarray(func(pop), dtype=float)
        return np.array([func(p) for p in pop], dtype=float)

    def trial(i, best):
        pool = [j for j in range(M) if j != i and j != best]
        r1, r2 = rng.choice(pool, size=2, replace=False)
        mutant = np.clip(pop[best] + cfg.scale_factor * (pop[r1] - pop[r2]), lower, upper)
        cross = rng.random(d) < cfg.crossover_rate
        cross[rng.integers(d)] = True
        return np.where(cross, mutant, pop[i])

    pop = lower + rng.random((M, d)) * (upper - lower)
    if init is not None:
        init = np.atleast_2d(np.asarray(init, dtype=float))[:M]
        pop[: len(init)] = np.clip(init, lower, upper)
    fit = score(pop)
    best = int(np.argmin(fit))
    trace = DeTrace([float(fit[best])])

    for _ in range(cfg.generations):
        if abs(fit[best]) < cfg.tol:
            break
        if updating == "immediate":
            for i in range(M):
                u = trial(i, best)
                fu = score(u[None])[0]
                if fu <= fit[i]:
                    pop[i], fit[i] = u, fu
                    if fu < fit[best]:
                        best = i
        else:
            trials = np.array([trial(i, best) for i in range(M)])
            trial_fit = score(trials)
            better = trial_fit <= fit
            pop[better] = trials[better]
            fit[better] = trial_fit[better]
            best = int(np.argmin(fit))
        trace.best_fitness.append(float(fit[best]))

    trace.best_vector = pop[best].copy()
    return pop[best].copy(), trace


def encode(B: AccumulationMatrix) -> np.ndarray:
    """Row-major packing of the lower triangle."""
    return B.matrix[np.tril_indices(B.n)].copy()


def _unpack(vectors: np.ndarray, n: int) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[-1] != n * (n + 1) // 2:
        raise LengthMismatch(
            f"an {n}x{n} lower triangle has {n * (n + 1) // 2} entries, got {vectors.shape[-1]}")
    out = np.zeros(vectors.shape[:-1] + (n, n))
    rows, cols = np.tril_indices(n)
    out[..., rows, cols] = vectors
    return out


def decode(vector, n: int) -> AccumulationMatrix:
    return AccumulationMatrix(_unpack(vector, n))


def optimize_b(X0, cfg: DeConfig = DeConfig(), seed_standard: bool = True):
    """Choose ``B`` minimising the GADGMSS fitting CVPE on ``X0``.

    The classical accumulation matrix is placed in the initial population when
    ``seed_standard`` is set, so the result never fits worse than it.

    Returns
    -------
    B : AccumulationMatrix
    trace : DeTrace
    """
    x0 = np.atleast_2d(closure(_as_array(X0)))
    n = x0.shape[0]
    if n < 3:
        raise ConfigError(f"need at least 3 training rows to optimise B, got {n}")
    try:
        gadgmss.fit(x0, standard_ago(n))
    except DegenerateSeries as exc:
        raise ConfigError(f"cannot optimise B: {exc}") from exc

    U0 = ilr(x0)
    lower, upper = cfg.bounds(n)

    def objective(pop):
        return gadgmss.fitting_cvpe_batch(U0, _unpack(pop, n))

    init = encode(standard_ago(n)) if seed_standard else None
    best, trace = differential_evolution(objective, lower, upper, cfg, init=init,
                                         vectorized=True, updating=cfg.updating)
    return decode(best, n), trace


def optimize_b_restarts(X0, cfg: DeConfig = DeConfig(), restarts: int = 1):
    """Run :func:`optimize_b` with seeds ``cfg.seed .. cfg.seed + restarts - 1``.

    Keeps the run with the lowest final fitting CVPE (earliest seed on ties).
    Returns ``(B, trace, seed)``.
    """
    if restarts < 1:
        raise ConfigError("restarts must be at least 1")
    best = None
    for k in range(restarts):
        run_cfg = replace(cfg, seed=cfg.seed + k)
        B, trace = optimize_b(X0, run_cfg)
        if best is None or trace.best_fitness[-1] < best[1].best_fitness[-1]:
            best = (B, trace, run_cfg.seed)
    return best
