"""Forecast error metrics."""

from dataclasses import dataclass, field

import numpy as np

from .core_ops import DomainError, SizeError, as_series

METRIC_NAMES = ("MAPE", "MSE", "MAE", "RMSE")


@dataclass(frozen=True)
class MetricReport:
    mape: float
    mse: float
    mae: float
    rmse: float
    n: int
    per_point_errors: list = field(default_factory=list)

    def as_row(self):
        return {"MAPE": self.mape, "MSE": self.mse, "MAE": self.mae, "RMSE": self.rmse}


def evaluate(actual, predicted, with_mape=True):
    """Compare ``predicted`` against ``actual``.

    MAPE is reported in percent. Set ``with_mape=False`` to allow zeros in
    ``actual``; MAPE is then NaN.
    """
    a = as_series(actual)
    p = as_series(predicted)
    if a.shape != p.shape:
        raise SizeError(f"length mismatch: {a.size} actual vs {p.size} predicted")
    err = a - p
    abs_err = np.abs(err)
    if with_mape:
        zero = np.flatnonzero(a == 0.0)
        if zero.size:
            raise DomainError(f"MAPE undefined: actual value at index {int(zero[0]) + 1} is zero")
        mape = float(100.0 * np.mean(abs_err / np.abs(a)))
    else:
        mape = float("nan")
    mse = float(np.mean(err * err))
    return MetricReport(
        mape=mape,
        mse=mse,
        mae=float(np.mean(abs_err)),
        rmse=float(np.sqrt(mse)),
        n=int(a.size),
        per_point_errors=[(float(x), float(y), float(e)) for x, y, e in zip(a, p, abs_err)],
    )


def mape(actual, predicted):
    return evaluate(actual, predicted).mape
