"""Independent reference computations used by the tests.

Everything here is written with plain loops and ``math`` so that it shares no
code path with the package.
"""

import math

import numpy as np


def accumulate(x, alpha=1.0, beta=1.0):
    g = math.gamma(beta + 1.0)
    out, total = [], 0.0
    for t, v in enumerate(x, start=1):
        total += v / t ** (1.0 - alpha)
        out.append(g * total)
    return out


def grey_least_squares(x, alpha=1.0, beta=1.0):
    """(a, b, residual) from an explicit B, Y and numpy's lstsq."""
    y = accumulate(x, alpha, beta)
    B = [[-0.5 * (y[k] + y[k - 1]), 1.0] for k in range(1, len(y))]
    Y = [y[k] - y[k - 1] for k in range(1, len(y))]
    (a, b), *_ = np.linalg.lstsq(np.array(B), np.array(Y), rcond=None)
    residual = sum((Yk - (Bk[0] * a + Bk[1] * b)) ** 2 for Bk, Yk in zip(B, Y))
    return float(a), float(b), residual


def response(a, b, y1, k):
    return (y1 - b / a) * math.exp(-a * (k - 1)) + b / a


def restored(a, b, x, k, alpha=1.0, beta=1.0):
    """Restored grey value at 1-based index k >= 2."""
    y1 = math.gamma(beta + 1.0) * x[0]
    d = response(a, b, y1, k) - response(a, b, y1, k - 1)
    return k ** (1.0 - alpha) / math.gamma(beta + 1.0) * d


def finite_difference_gradient(loss, theta, eps=1e-6):
    grad = np.empty_like(theta)
    for i in range(theta.size):
        up, down = theta.copy(), theta.copy()
        up[i] += eps
        down[i] -= eps
        grad[i] = (loss(up) - loss(down)) / (2.0 * eps)
    return grad
