import math

import pytest

from flowcutter import (DepthCapError, DomainError, bowen_dimension,
                        box_dimension, certified_bracket, dimension_estimate,
                        interval_table, pressure_sum)

MIDDLE_THIRDS = math.log(2.0) / math.log(3.0)


def test_calibration_recovers_middle_thirds(calibration_map):
    for depth in (4, 8, 10):
        est = dimension_estimate(calibration_map, depth, "bowen")
        assert est.value == pytest.approx(MIDDLE_THIRDS, abs=1e-6)
        assert est.lower == est.upper == pytest.approx(MIDDLE_THIRDS, rel=1e-15)


def test_calibration_box_slope_is_exact(calibration_map):
    assert box_dimension(calibration_map, 8) == pytest.approx(
        MIDDLE_THIRDS, abs=1e-9)


def test_real_map_estimate_inside_bracket(cmap):
    est = dimension_estimate(cmap, 10, "bowen")
    assert est.lower < est.value < est.upper
    assert 0.0 < est.lower and est.upper < 1.0


def test_bracket_from_slope_range(consts):
    lo, hi = certified_bracket(consts)
    assert lo == pytest.approx(
        math.log(2) / math.log(3 * math.exp(consts.B1 * consts.T)), rel=1e-15)
    assert hi == pytest.approx(
        math.log(2) / math.log(3 * math.exp(-consts.B1 * consts.T)), rel=1e-15)
    assert lo < MIDDLE_THIRDS < hi


def test_pressure_is_strictly_decreasing(cmap):
    logs = interval_table(cmap, 8).log_sizes()
    probes = [pressure_sum(logs, s) for s in (0.2, 0.5, 0.8)]
    assert probes[0] > probes[1] > probes[2]


def test_estimates_stabilize_with_depth(cmap):
    a = bowen_dimension(cmap, 10)
    b = bowen_dimension(cmap, 12)
    assert abs(a - b) <= 0.005


def test_box_estimate_agrees_roughly(cmap):
    bowen = bowen_dimension(cmap, 10)
    box = box_dimension(cmap, 10)
    assert abs(bowen - box) <= 0.05


def test_validation(cmap):
    with pytest.raises(DomainError):
        dimension_estimate(cmap, 8, method="hausdorff")
    with pytest.raises(DepthCapError):
        dimension_estimate(cmap, 17)
    with pytest.raises(DomainError):
        dimension_estimate(cmap, 0)
