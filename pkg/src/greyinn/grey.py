"""GM(1,1) and tM-FGM(1,1) grey prediction models."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_ops import (
    DomainError,
    FractionalOrder,
    as_series,
    first_accumulation,
    tm_accumulation,
)

MIN_FIT_LENGTH = 4
A_GUARD = 50.0
ZERO_A_TOL = 1e-9
DET_TOL = 1e-12
# exp() overflows just above 709
EXP_LIMIT = 700.0


class DegenerateFitError(ArithmeticError):
    """Least-squares system is singular or the estimate is unusable."""


class HorizonError(ValueError):
    """Requested forecast horizon is invalid or would overflow."""


@dataclass(frozen=True)
class GreyParams:
    a: float
    b: float


@dataclass(frozen=True)
class GreyModelFit:
    """Result of fitting a grey model.

    ``order`` is None for the classical GM(1,1). ``accumulated_fit`` and
    ``restored_fit`` cover the training indices k = 1..n.
    """

    params: GreyParams
    order: Optional[FractionalOrder]
    accumulated_fit: np.ndarray
    restored_fit: np.ndarray
    n: int
    # accumulated value at k = 1, seeds the response function
    y1: float
    x1: float

    def response(self, k):
        """Fitted accumulated sequence at (1-based) indices ``k``."""
        return _response(self.params, self.y1, np.asarray(k, dtype=np.float64))

    def restore(self, k):
        """Restored (raw-scale) values at integer indices ``k`` >= 1."""
        k = np.asarray(k, dtype=np.float64)
        diff = self.response(k) - np.where(k > 1, self.response(k - 1), 0.0)
        if self.order is None:
            out = diff
        else:
            out = k ** (1.0 - self.order.alpha) / self.order.scale * diff
        return np.where(k == 1, self.x1, out)


def _response(params, y1, k):
    a, b = params.a, params.b
    if abs(a) < ZERO_A_TOL:
        # limit of the exponential response as a -> 0
        return y1 + b * (k - 1.0)
    ratio = b / a
    return (y1 - ratio) * np.exp(-a * (k - 1.0)) + ratio


def design_matrix(y):
    """Build ``B`` and ``Y`` of the grey least-squares problem from accumulated ``y``."""
    background = -0.5 * (y[1:] + y[:-1])
    B = np.column_stack([background, np.ones_like(background)])
    Y = y[1:] - y[:-1]
    return B, Y


def solve_normal_equations(B, Y):
    """Solve the 2x2 normal equations ``(B^T B) p = B^T Y`` in closed form."""
    m = B.T @ B
    rhs = B.T @ Y
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = abs(m[0, 0] * m[1, 1])
    if not np.isfinite(det) or scale == 0.0 or abs(det) < DET_TOL * scale:
        raise DegenerateFitError("normal matrix is singular or near-singular")
    a = (m[1, 1] * rhs[0] - m[0, 1] * rhs[1]) / det
    b = (m[0, 0] * rhs[1] - m[1, 0] * rhs[0]) / det
    return float(a), float(b)


def _check_training_series(s):
    x = as_series(s, min_length=MIN_FIT_LENGTH)
    if np.any(x <= 0.0):
        idx = int(np.argmax(x <= 0.0)) + 1
        raise DomainError(f"grey models need strictly positive data (x({idx}) = {x[idx - 1]!r})")
    return x


def _fit(x, y, order):
    B, Y = design_matrix(y)
    a, b = solve_normal_equations(B, Y)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DegenerateFitError("non-finite parameter estimate")
    if abs(a) >= A_GUARD:
        raise DegenerateFitError(f"|a| = {abs(a):.6g} exceeds the overflow guard {A_GUARD}")
    n = x.size
    if abs(a) * (n - 1) > EXP_LIMIT:
        raise DegenerateFitError("response function overflows on the training range")
    params = GreyParams(a, b)
    k = np.arange(1, n + 1, dtype=np.float64)
    acc = _response(params, float(y[0]), k)
    acc[0] = y[0]
    fit = GreyModelFit(
        params=params,
        order=order,
        accumulated_fit=acc,
        restored_fit=np.empty(0),
        n=n,
        y1=float(y[0]),
        x1=float(x[0]),
    )
    restored = fit.restore(k)
    object.__setattr__(fit, "restored_fit", restored)
    return fit


def fit_gm11(s):
    """Fit the classical GM(1,1) model to a positive series of length >= 4."""
    x = _check_training_series(s)
    return _fit(x, first_accumulation(x), None)


def fit_tmfgm(s, order):
    """Fit tM-FGM(1,1): GM(1,1) on the truncated M-fractional accumulation."""
    x = _check_training_series(s)
    if not isinstance(order, FractionalOrder):
        order = FractionalOrder(*order)
    return _fit(x, tm_accumulation(x, order), order)


def predict(fit, horizon):
    """Restored forecasts for k = n+1 .. n+horizon."""
    if int(horizon) != horizon or horizon < 1:
        raise HorizonError(f"horizon must be a positive integer, got {horizon!r}")
    horizon = int(horizon)
    last = fit.n + horizon
    if abs(fit.params.a) * (last - 1) > EXP_LIMIT:
        raise HorizonError(f"horizon {horizon} overflows the response function (a = {fit.params.a!r})")
    k = np.arange(fit.n + 1, last + 1, dtype=np.float64)
    return fit.restore(k)


def predict_gm11(fit, horizon):
    return predict(fit, horizon)


def predict_tmfgm(fit, horizon):
    return predict(fit, horizon)
