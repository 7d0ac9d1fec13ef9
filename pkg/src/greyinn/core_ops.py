"""Discrete operators and special functions used by the grey models.

All series are handled as 1-D float64 numpy arrays. Position 0 of an array
holds the observation at time index k = 1.
"""

import math

import numpy as np


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SizeError(ValueError):
    """Series too short for the requested operation."""


class FractionalOrder:
    """Order pair (alpha, beta) of the truncated M-fractional operators.

    ``alpha`` must lie in (0, 1] and ``beta`` must be positive.
    """

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta):
        alpha = float(alpha)
        beta = float(beta)
        if not (0.0 < alpha <= 1.0):
            raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
        if not (beta > 0.0 and math.isfinite(beta)):
            raise DomainError(f"beta must be positive and finite, got {beta!r}")
        self.alpha = alpha
        self.beta = beta

    def __iter__(self):
        yield self.alpha
        yield self.beta

    def __eq__(self, other):
        if not isinstance(other, FractionalOrder):
            return NotImplemented
        return (self.alpha, self.beta) == (other.alpha, other.beta)

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def __repr__(self):
        return f"FractionalOrder(alpha={self.alpha!r}, beta={self.beta!r})"

    @property
    def scale(self):
        """Gamma(beta + 1), the common factor of both operators."""
        return gamma(self.beta + 1.0)


def as_series(values, min_length=1):
    """Validate ``values`` as a finite 1-D series and return a float64 copy."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise SizeError(f"series must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise SizeError(f"series needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("series contains NaN or infinite values")
    return arr


def gamma(x):
    """Gamma function for positive finite ``x``."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma is defined here only for finite x > 0, got {x!r}")
    # CPython's Lanczos-based implementation; relative error ~1e-15 on (0, 171).
    return math.gamma(x)


def truncated_mittag_leffler(i, beta, z):
    """Truncated one-parameter Mittag-Leffler sum ``sum_{k=0}^{i} z**k / Gamma(beta*k + 1)``."""
    if int(i) != i or i < 0:
        raise DomainError(f"truncation index must be a non-negative integer, got {i!r}")
    beta = float(beta)
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    z = float(z)
    total = 0.0
    for k in range(int(i) + 1):
        total += z**k / gamma(beta * k + 1.0)
    return total


def first_difference(s):
    """Backward difference ``f(k) - f(k-1)`` for k = 2..n."""
    s = as_series(s, min_length=2)
    return s[1:] - s[:-1]


def first_accumulation(s):
    """Accumulated generating operation (running sum)."""
    return np.cumsum(as_series(s))


def _tm_weights(n, order):
    # k**(1 - alpha) for k = 1..n
    k = np.arange(1, n + 1, dtype=np.float64)
    return k ** (1.0 - order.alpha)


def tm_accumulation(s, order):
    """Truncated M-fractional accumulation.

    ``y(k) = Gamma(beta + 1) * sum_{t=1}^{k} x(t) / t**(1 - alpha)``. With
    alpha = beta = 1 this is exactly :func:`first_accumulation`.
    """
    s = as_series(s)
    return order.scale * np.cumsum(s / _tm_weights(s.size, order))


def tm_difference(s, order):
    """Truncated M-fractional difference, inverse of :func:`tm_accumulation`.

    ``(k**(1 - alpha) / Gamma(beta + 1)) * (f(k) - f(k-1))`` with f(0) = 0,
    so the output has the same length as the input.
    """
    s = as_series(s)
    diff = np.diff(s, prepend=0.0)
    return _tm_weights(s.size, order) / order.scale * diff
