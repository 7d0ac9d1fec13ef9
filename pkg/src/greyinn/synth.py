"""Synthetic test series."""

from decimal import Decimal

import numpy as np


def geometric(c, q, n):
    # decimal arithmetic so that e.g. 10 * 1.2**2 comes out as 14.4
    dc, dq = Decimal(repr(float(c))), Decimal(repr(float(q)))
    return np.array([float(dc * dq**k) for k in range(int(n))])


def constant(c, n):
    return np.full(int(n), float(c))


def noisy_exponential(c=100.0, q=1.08, n=20, sigma=0.02, seed=0):
    """``c * q**(k-1) * (1 + sigma * eps_k)`` with standard normal ``eps``."""
    rng = np.random.default_rng(seed)
    k = np.arange(int(n), dtype=np.float64)
    return c * q**k * (1.0 + sigma * rng.standard_normal(int(n)))


GENERATORS = {
    "geometric": geometric,
    "constant": constant,
    "noisy-exp": noisy_exponential,
}
