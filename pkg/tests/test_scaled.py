import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcutter import DomainError, Locus, PointBatch, ScaledPoint


def test_zero_and_one():
    assert ScaledPoint.from_raw(0.0).locus is Locus.ZERO
    p = ScaledPoint.from_raw(1.0)
    assert p.locus is Locus.INJ and p.n == 0 and p.u == 1.0
    assert p.raw == 1.0


def test_window_boundaries_classify_into_windows():
    p = ScaledPoint.from_raw(2.0 / 3.0)
    assert p.locus is Locus.INJ and p.n == 0 and p.u == 0.0
    q = ScaledPoint.from_raw(1.0 / 3.0)
    assert q.locus is Locus.INJ and q.n == 1 and q.u == 1.0


def test_hole_and_gap():
    h = ScaledPoint.from_raw(0.5)
    assert h.locus is Locus.HOLE and not h.in_domain
    g = ScaledPoint.from_raw(0.15)
    assert g.locus is Locus.GAP and g.n == 1
    assert g.raw == pytest.approx(0.15, abs=1e-17)
    assert g.in_domain


def test_window_membership_example():
    # 0.7 = (0.1 + 2)/3 sits in the right branch piece
    p = ScaledPoint.from_raw(0.7)
    assert p.locus is Locus.INJ and p.n == 0
    assert p.u == pytest.approx(0.1, abs=1e-15)


@given(st.one_of(st.just(0.0),
                 st.floats(min_value=1e-250, max_value=1.0)))
@settings(max_examples=300, deadline=None)
def test_raw_round_trip_within_one_ulp(x):
    p = ScaledPoint.from_raw(x)
    assert abs(p.raw - x) <= math.ulp(x)


@given(st.integers(min_value=0, max_value=30),
       st.floats(min_value=0.0, max_value=1.0))
@settings(max_examples=300, deadline=None)
def test_window_round_trip(n, u):
    p = ScaledPoint.in_window(n, u)
    q = ScaledPoint.from_raw(p.raw)
    # boundary coordinates may legitimately flip to the adjacent locus;
    # the unit coordinate keeps absolute (not relative) precision through
    # the raw detour, since u + 2 dominates the representation
    if q.locus is Locus.INJ and q.n == n:
        assert abs(q.u - u) <= 1e-15
    assert abs(q.raw - p.raw) <= 2 * math.ulp(p.raw)


def test_deep_points_stay_meaningful():
    p = ScaledPoint.in_window(100, 0.37)
    assert p.log_raw == pytest.approx(math.log(2.37) - 101 * math.log(3.0),
                                      rel=1e-15)
    assert p.raw > 0.0  # still representable at n = 100


def test_log_raw_of_zero():
    assert ScaledPoint.zero().log_raw == -math.inf


def test_validation():
    with pytest.raises(DomainError):
        ScaledPoint(Locus.INJ, -1, 0.5)
    with pytest.raises(DomainError):
        ScaledPoint(Locus.INJ, 3, 1.5)
    with pytest.raises(DomainError):
        ScaledPoint(Locus.GAP, 0, 0.5)
    with pytest.raises(DomainError):
        ScaledPoint(Locus.HOLE, 0, 0.9)
    with pytest.raises(DomainError):
        ScaledPoint.from_raw(1.2)


def test_batch_matches_scalar_classification():
    rng = np.random.default_rng(42)
    xs = np.concatenate([rng.uniform(0.0, 1.0, 3000),
                         [0.0, 1.0, 0.5, 1 / 3, 2 / 3, 1e-9]])
    b = PointBatch.from_raw(xs)
    for i in range(0, xs.size, 97):
        p = ScaledPoint.from_raw(float(xs[i]))
        assert int(b.locus[i]) == int(p.locus)
        assert int(b.n[i]) == p.n
        assert float(b.u[i]) == p.u
    assert np.all(np.abs(b.raw() - xs) <= np.spacing(xs))


def test_batch_point_accessor():
    b = PointBatch.from_raw(np.array([0.0, 0.9, 0.15]))
    assert b.point(0).locus is Locus.ZERO
    assert b.point(1).locus is Locus.INJ
    assert b.point(2).locus is Locus.GAP
    assert b.size == 3


def test_batch_from_points_round_trip():
    pts = [ScaledPoint.zero(), ScaledPoint.in_window(4, 0.25),
           ScaledPoint.from_raw(0.4)]
    b = PointBatch.from_points(pts)
    assert [b.point(i) for i in range(3)] == pts
