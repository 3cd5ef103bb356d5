"""Truncated integer series arithmetic and the semistable Poincare series
recursion, with an independent partition-counting oracle for the
classifying-space series."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverflow import (
    StabilityParam,
    TruncatedSeries,
    a2,
    jordan2,
    poincare_BG,
    poincare_semistable,
    reconstruct_BG_check,
    star21,
)


def test_series_arithmetic():
    s = TruncatedSeries(5, [1, 2, 3])
    t = TruncatedSeries(5, [0, 1])
    assert (s + t).coeffs == (1, 3, 3, 0, 0, 0)
    assert (s - t).coeffs == (1, 1, 3, 0, 0, 0)
    assert (s * t).coeffs == (0, 1, 2, 3, 0, 0)
    assert s.shift(2).coeffs == (0, 0, 1, 2, 3, 0)
    assert TruncatedSeries.one(3).coeffs == (1, 0, 0, 0)
    assert TruncatedSeries.zero(3).is_zero()
    with pytest.raises(ValueError):
        s + TruncatedSeries(4, [1])


def test_geometric_factor():
    # 1/(1-t^2) truncated
    s = TruncatedSeries.one(6).geometric_factor(2)
    assert s.coeffs == (1, 0, 1, 0, 1, 0, 1)
    # (1-t^2) * 1/(1-t^2) == 1
    back = s - s.shift(2)
    assert back.coeffs == (1, 0, 0, 0, 0, 0, 0)


def _partition_count_oracle(n, parts):
    """Number of multisets of `parts` summing to n, by direct DP."""
    ways = [1] + [0] * n
    for p in parts:
        for k in range(p, n + 1):
            ways[k] += ways[k - p]
    return ways[n]


def test_poincare_BG_against_partition_oracle():
    for v, deg in [((1,), 6), ((2,), 8), ((3,), 10), ((2, 1), 8)]:
        s = poincare_BG(v, deg)
        parts = [2 * k for d in v for k in range(1, d + 1)]
        for n in range(deg + 1):
            assert s.coeffs[n] == _partition_count_oracle(n, parts)


def test_poincare_BG_examples():
    assert poincare_BG((1,), 6).coeffs == (1, 0, 1, 0, 1, 0, 1)
    assert poincare_BG((2,), 8).coeffs == (1, 0, 1, 0, 2, 0, 2, 0, 3)
    assert poincare_BG((), 4).coeffs == (1, 0, 0, 0, 0)


def test_a2_semistable_both_signs():
    q, v, a = a2()
    s = poincare_semistable(q, v, a, 10)
    assert s.coeffs == (1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1)
    a_rev = StabilityParam.trace_free(q, v, [-1, 1])
    assert poincare_semistable(q, v, a_rev, 10).is_zero()


def test_rank_one_is_BG():
    q, v, a = a2()
    s = poincare_semistable(q, (1, 0), StabilityParam([0, 0]), 8)
    assert s.coeffs == poincare_BG((1,), 8).coeffs


def test_nonnegative_coefficients():
    for make in (a2, jordan2, star21):
        q, v, a = make()
        s = poincare_semistable(q, v, a, 16)
        assert all(c >= 0 for c in s.coeffs)


def test_reconstruct_BG_zero_residual():
    for make, deg in [(a2, 20), (jordan2, 12), (star21, 12)]:
        q, v, a = make()
        assert reconstruct_BG_check(q, v, a, deg).is_zero()
    q, v, _ = a2()
    a_rev = StabilityParam.trace_free(q, v, [-1, 1])
    assert reconstruct_BG_check(q, v, a_rev, 12).is_zero()


def test_memo_disabled_matches():
    q, v, a = star21()
    with_memo = poincare_semistable(q, v, a, 12)
    # a fresh empty memo per call recomputes everything
    fresh = poincare_semistable(q, v, a, 12, _memo={})
    assert with_memo.coeffs == fresh.coeffs


@settings(max_examples=30, deadline=None)
@given(
    c1=st.lists(st.integers(-9, 9), max_size=6),
    c2=st.lists(st.integers(-9, 9), max_size=6),
    c3=st.lists(st.integers(-9, 9), max_size=6),
)
def test_ring_axioms(c1, c2, c3):
    n = 8
    x, y, z = (TruncatedSeries(n, c) for c in (c1, c2, c3))
    assert (x * y).coeffs == (y * x).coeffs
    assert ((x * y) * z).coeffs == (x * (y * z)).coeffs
    assert (x * (y + z)).coeffs == (x * y + x * z).coeffs
