import math

import numpy as np
import pytest

from greyinn.grey import fit_gm11
from greyinn.pso import PSOConfig, SearchError, order_fitness, pso_optimize, select_order

UNIT_BOX = ((0.0, 1.0), (0.0, 1.0))


def sphere(p):
    return (p[0] - 0.3) ** 2 + (p[1] - 0.7) ** 2


def test_sphere_minimum():
    r = pso_optimize(sphere, PSOConfig(bounds=UNIT_BOX, seed=0))
    np.testing.assert_allclose(r.best_position, [0.3, 0.7], atol=1e-3)
    assert r.best_fitness == sphere(r.best_position)
    assert r.evaluations == 30 * 101


@pytest.mark.parametrize("seed", range(10))
def test_sphere_seed_robustness(seed):
    assert pso_optimize(sphere, PSOConfig(bounds=UNIT_BOX, seed=seed)).best_fitness < 1e-4


def test_constant_objective():
    r = pso_optimize(lambda p: 2.5, PSOConfig(bounds=UNIT_BOX, iterations=20))
    assert r.best_fitness == 2.5
    assert set(r.trace) == {2.5}


def test_positions_stay_in_box_and_trace_monotone():
    seen = []

    def f(p):
        seen.append(p)
        return (p[0] - 5.0) ** 2 + p[1] ** 2

    r = pso_optimize(f, PSOConfig(bounds=((0.2, 0.2 + 1e-9), (-1.0, 1.0)), iterations=30))
    arr = np.array(seen)
    assert np.all(arr[:, 0] >= 0.2) and np.all(arr[:, 0] <= 0.2 + 1e-9)
    assert np.all(np.abs(arr[:, 1]) <= 1.0)
    assert 0.2 <= r.best_position[0] <= 0.2 + 1e-9
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))


def test_determinism():
    a = pso_optimize(sphere, PSOConfig(bounds=UNIT_BOX, seed=7, iterations=25))
    b = pso_optimize(sphere, PSOConfig(bounds=UNIT_BOX, seed=7, iterations=25))
    assert np.array_equal(a.best_position, b.best_position)
    assert a.trace == b.trace


def test_nan_is_penalized():
    r = pso_optimize(lambda p: np.nan if p[0] > 0.5 else sphere(p), PSOConfig(bounds=UNIT_BOX, iterations=40))
    assert r.best_position[0] <= 0.5
    with pytest.raises(SearchError):
        pso_optimize(lambda p: np.nan, PSOConfig(bounds=UNIT_BOX, iterations=3))


def test_config_validation():
    with pytest.raises(ValueError):
        PSOConfig(swarm_size=1)
    with pytest.raises(ValueError):
        PSOConfig(bounds=((1.0, 0.0),))


def gm_generated_series():
    return fit_gm11(100 * 1.06 ** np.arange(12) * (1 + 0.03 * np.sin(np.arange(12)))).restored_fit


def test_select_order_not_worse_than_classical():
    x = gm_generated_series()
    order, result = select_order(x, PSOConfig(seed=3), return_result=True)
    assert order_fitness(x, order.alpha, order.beta) <= order_fitness(x, 1.0, 1.0) + 1e-6
    assert result.best_fitness == order_fitness(x, order.alpha, order.beta)


def test_select_order_deterministic():
    x = gm_generated_series()
    assert select_order(x, PSOConfig(seed=11)) == select_order(x, PSOConfig(seed=11))


def _grid_oracle(x, step=0.01):
    """Brute-force in-sample MAPE over the (alpha, beta) box, vectorised over the grid."""
    alphas = np.round(np.arange(0.01, 1.0 + 1e-12, step), 10)
    betas = np.round(np.arange(0.01, 2.0 + 1e-12, step), 10)
    best = np.inf
    n = len(x)
    k = np.arange(1, n + 1)
    for alpha in alphas:
        base = np.cumsum(x / k ** (1 - alpha))
        for beta in betas:
            g = math.gamma(beta + 1)
            y = g * base
            B = np.column_stack([-0.5 * (y[1:] + y[:-1]), np.ones(n - 1)])
            Y = y[1:] - y[:-1]
            (a, b), *_ = np.linalg.lstsq(B, Y, rcond=None)
            if abs(a) < 1e-9:
                continue
            resp = (y[0] - b / a) * np.exp(-a * (k - 1)) + b / a
            xh = k ** (1 - alpha) / g * np.diff(resp, prepend=0.0)
            xh[0] = x[0]
            best = min(best, 100 * np.mean(np.abs(xh - x) / x))
    return best


def test_select_order_against_grid_oracle():
    rng = np.random.default_rng(42)
    x = 80 * 1.07 ** np.arange(10) + 6 * rng.standard_normal(10)
    grid_best = _grid_oracle(x)
    _, result = select_order(x, PSOConfig(seed=0), return_result=True)
    assert result.best_fitness <= grid_best + 1e-4
