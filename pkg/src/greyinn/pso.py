"""Global-best particle swarm optimization and fractional-order selection."""

from dataclasses import dataclass, field

import numpy as np

from .core_ops import FractionalOrder, as_series
from .grey import DegenerateFitError, fit_tmfgm, _check_training_series

ALPHA_BOUNDS = (0.01, 1.0)
BETA_BOUNDS = (0.01, 2.0)


class SearchError(RuntimeError):
    """No feasible candidate was found."""


@dataclass(frozen=True)
class PSOConfig:
    swarm_size: int = 30
    iterations: int = 100
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    c1: float = 2.0
    c2: float = 2.0
    bounds: tuple = (ALPHA_BOUNDS, BETA_BOUNDS)
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be at least 2")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        for low, high in self.bounds:
            if not low < high:
                raise ValueError(f"invalid bounds [{low}, {high}]")

    @property
    def lower(self):
        return np.array([b[0] for b in self.bounds], dtype=np.float64)

    @property
    def upper(self):
        return np.array([b[1] for b in self.bounds], dtype=np.float64)


@dataclass
class SearchResult:
    best_position: np.ndarray
    best_fitness: float
    evaluations: int
    trace: list = field(default_factory=list)


def _evaluate(objective, positions):
    fit = np.empty(len(positions))
    for i, p in enumerate(positions):
        v = float(objective(p.copy()))
        fit[i] = np.inf if np.isnan(v) else v
    return fit


def pso_optimize(objective, cfg=PSOConfig()):
    """Minimize ``objective`` over the box ``cfg.bounds``.

    Velocities are clamped to half the box width per dimension, positions
    are clipped to the box, and the inertia weight decays linearly from
    ``inertia_start`` to ``inertia_end``. NaN fitness counts as +inf.
    """
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.lower, cfg.upper
    dim = lo.size
    vmax = 0.5 * (hi - lo)
    n = cfg.swarm_size

    x = lo + rng.random((n, dim)) * (hi - lo)
    v = rng.uniform(-vmax, vmax, size=(n, dim))
    fx = _evaluate(objective, x)
    evaluations = n

    pbest, pfit = x.copy(), fx.copy()
    g = int(np.argmin(pfit))  # argmin returns the lowest index on ties
    gbest, gfit = pbest[g].copy(), float(pfit[g])
    trace = [gfit]

    for it in range(cfg.iterations):
        w = cfg.inertia_start + (cfg.inertia_end - cfg.inertia_start) * it / max(cfg.iterations - 1, 1)
        r1 = rng.random((n, dim))
        r2 = rng.random((n, dim))
        v = w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (gbest - x)
        v = np.clip(v, -vmax, vmax)
        x = np.clip(x + v, lo, hi)
        fx = _evaluate(objective, x)
        evaluations += n

        better = fx < pfit
        pbest[better] = x[better]
        pfit[better] = fx[better]
        g = int(np.argmin(pfit))
        if pfit[g] < gfit:
            gbest, gfit = pbest[g].copy(), float(pfit[g])
        trace.append(gfit)

    if not np.isfinite(gfit):
        raise SearchError("objective was non-finite at every evaluated position")
    return SearchResult(gbest, gfit, evaluations, trace)


def order_fitness(x, alpha, beta):
    """In-sample MAPE (percent) of tM-FGM(1,1) with order (alpha, beta)."""
    try:
        fit = fit_tmfgm(x, FractionalOrder(alpha, beta))
    except (DegenerateFitError, ValueError):
        return np.inf
    err = np.abs(fit.restored_fit - x) / np.abs(x)
    value = 100.0 * float(np.mean(err))
    return value if np.isfinite(value) else np.inf


def select_order(s, cfg=PSOConfig(), return_result=False):
    """Choose (alpha, beta) minimizing the in-sample MAPE of tM-FGM(1,1)."""
    x = _check_training_series(as_series(s))
    result = pso_optimize(lambda p: order_fitness(x, p[0], p[1]), cfg)
    order = FractionalOrder(*result.best_position)
    if return_result:
        return order, result
    return order
