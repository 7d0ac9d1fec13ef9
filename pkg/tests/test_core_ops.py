import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from greyinn.core_ops import (
    DomainError,
    FractionalOrder,
    SizeError,
    first_accumulation,
    first_difference,
    gamma,
    tm_accumulation,
    tm_difference,
    truncated_mittag_leffler,
)

series = st.lists(st.floats(0.001, 100.0), min_size=1, max_size=50)
orders = st.builds(FractionalOrder, st.floats(0.01, 1.0), st.floats(0.01, 2.0))


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (2.0, 1.0), (0.5, 1.772453850905516)])
def test_gamma_identities(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.5, 3.7, 10.2])
def test_gamma_recurrence(x):
    assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-11)


def test_gamma_matches_high_precision_on_range():
    mpmath.mp.dps = 40
    for x in np.linspace(0.01, 50.0, 301):
        ref = float(mpmath.gamma(mpmath.mpf(float(x))))
        assert abs(gamma(x) - ref) <= 1e-12 * ref


@pytest.mark.parametrize("x", [0.0, -1.0, float("inf"), float("nan")])
def test_gamma_domain(x):
    with pytest.raises(DomainError):
        gamma(x)


def test_mittag_leffler_examples():
    assert truncated_mittag_leffler(0, 2.0, 5.0) == 1.0
    for i in (0, 3, 10):
        for beta in (0.3, 1.0, 2.5):
            assert truncated_mittag_leffler(i, beta, 0.0) == 1.0


def test_mittag_leffler_partial_sum_of_e():
    # exact rational partial sum of 1/k!
    oracle = float(sum(Fraction(1, math.factorial(k)) for k in range(21)))
    assert oracle == pytest.approx(2.718281828459045, abs=1e-15)
    assert truncated_mittag_leffler(20, 1.0, 1.0) == pytest.approx(oracle, abs=1e-12)


def test_mittag_leffler_rejects_bad_beta():
    with pytest.raises(DomainError):
        truncated_mittag_leffler(3, 0.0, 1.0)


@given(st.floats(0.1, 3.0), st.floats(0.0, 5.0))
def test_mittag_leffler_nondecreasing_in_i(beta, z):
    vals = [truncated_mittag_leffler(i, beta, z) for i in range(12)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_first_difference_examples():
    assert first_difference([1, 3, 6]).tolist() == [2, 3]
    assert first_difference([4.5, 4.5, 4.5]).tolist() == [0, 0]
    with pytest.raises(SizeError):
        first_difference([1.0])


def test_first_accumulation_examples():
    assert first_accumulation([1, 2, 3]).tolist() == [1, 3, 6]
    assert first_accumulation([5]).tolist() == [5]
    assert first_accumulation([1, -1, 1]).tolist() == [1, 0, 1]


def test_non_finite_series_rejected():
    with pytest.raises(DomainError):
        first_accumulation([1.0, float("nan")])


@given(st.lists(st.floats(0.001, 100.0), min_size=2, max_size=50))
def test_classical_inverse_pair(s):
    s = np.array(s)
    back = first_difference(first_accumulation(s))
    np.testing.assert_allclose(back, s[1:], rtol=1e-12, atol=1e-12 * s.max())


def test_order_validation():
    with pytest.raises(DomainError):
        FractionalOrder(0.0, 1.0)
    with pytest.raises(DomainError):
        FractionalOrder(1.2, 1.0)
    with pytest.raises(DomainError):
        FractionalOrder(0.5, 0.0)


@given(series)
def test_tm_accumulation_reduces_to_cumsum(s):
    np.testing.assert_allclose(tm_accumulation(s, FractionalOrder(1, 1)), first_accumulation(s), rtol=1e-14)


def test_tm_accumulation_examples():
    mpmath.mp.dps = 40
    expected = [float(sum(mpmath.mpf(t) ** -0.5 for t in range(1, k + 1))) for k in (1, 2, 3)]
    assert expected == pytest.approx([1.0, 1.7071067811865475, 2.284457050376173], abs=1e-15)
    np.testing.assert_allclose(tm_accumulation([1, 1, 1], FractionalOrder(0.5, 1.0)), expected, rtol=1e-15)

    half_sqrt_pi = float(mpmath.sqrt(mpmath.pi) / 2)
    assert tm_accumulation([1.0], FractionalOrder(0.5, 0.5))[0] == pytest.approx(half_sqrt_pi, rel=1e-15)
    assert half_sqrt_pi == pytest.approx(0.8862269254527580, rel=1e-15)


def test_tm_difference_examples():
    assert tm_difference([1, 3, 6], FractionalOrder(1, 1)).tolist() == [1, 2, 3]
    np.testing.assert_allclose(
        tm_difference([1.0, 1.7071067811865475], FractionalOrder(0.5, 1.0)), [1.0, 1.0], atol=1e-15
    )


@settings(max_examples=200)
@given(series, orders)
def test_tm_inverse_pair(s, order):
    back = tm_difference(tm_accumulation(s, order), order)
    np.testing.assert_allclose(back, s, rtol=0, atol=1e-10)


@given(series, orders)
def test_tm_accumulation_strictly_increasing_for_positive_series(s, order):
    y = tm_accumulation(s, order)
    assert np.all(np.diff(y) > 0)
