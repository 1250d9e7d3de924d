from __future__ import annotations

import random

import pytest

from captune import (
    DimensionCalibration,
    ParamPoint,
    RatioPair,
    TransformSpace,
    change_ratio,
    clamp_to_anchors,
    interpolation_ratio,
    map_slider,
    recalibrate,
)
from captune.errors import (
    DegenerateCalibration,
    InvalidAnchorOrder,
    OutOfAnchorBounds,
    SliderOutOfRange,
)

TOL = 1e-9


def _random_calibration(rng: random.Random) -> DimensionCalibration:
    return DimensionCalibration(
        v_ref=rng.uniform(1.0, 10.0),
        s_ref=rng.uniform(-9.9, 9.9),
    )


def test_slider_mapping_reference_values():
    assert map_slider(DimensionCalibration(v_ref=2.0), 5.0) == pytest.approx(6.0, abs=TOL)
    assert map_slider(DimensionCalibration(v_ref=3.0), 6.0) == pytest.approx(7.2, abs=TOL)


def test_slider_endpoint_identities_random():
    rng = random.Random(1234)
    for _ in range(1000):
        c = _random_calibration(rng)
        assert map_slider(c, c.s_min) == pytest.approx(c.v_min, abs=TOL)
        assert map_slider(c, c.s_max) == pytest.approx(c.v_max, abs=TOL)
        assert map_slider(c, c.s_ref) == pytest.approx(c.v_ref, abs=TOL)


def test_slider_mapping_continuous_at_reference():
    rng = random.Random(99)
    for _ in range(100):
        c = _random_calibration(rng)
        eps = 1e-9
        left = map_slider(c, c.s_ref - eps)
        right = map_slider(c, c.s_ref + eps)
        assert left == pytest.approx(c.v_ref, abs=1e-6)
        assert right == pytest.approx(c.v_ref, abs=1e-6)


def test_slider_mapping_monotone():
    rng = random.Random(7)
    for _ in range(200):
        c = _random_calibration(rng)
        samples = sorted(rng.uniform(c.s_min, c.s_max) for _ in range(50))
        values = [map_slider(c, s) for s in samples]
        assert all(a <= b + TOL for a, b in zip(values, values[1:]))


def test_slider_out_of_range():
    with pytest.raises(SliderOutOfRange):
        map_slider(DimensionCalibration(v_ref=5.0), 10.5)


def test_interpolation_ratio_reference_values():
    assert round(interpolation_ratio(6, 2, 8), 2) == 0.67
    assert round(interpolation_ratio(5, 2, 7), 2) == 0.60


def test_interpolation_ratio_endpoints():
    assert interpolation_ratio(2, 2, 8) == 0.0
    assert interpolation_ratio(8, 2, 8) == 1.0


def test_interpolation_ratio_out_of_bounds():
    with pytest.raises(OutOfAnchorBounds):
        interpolation_ratio(9, 2, 8)


def test_interpolation_ratio_bad_anchors():
    with pytest.raises(InvalidAnchorOrder):
        interpolation_ratio(5, 8, 2)


def test_change_ratio_reference_values():
    assert change_ratio(6, 3, 2, 8) == pytest.approx(0.50, abs=TOL)
    assert change_ratio(5, 2, 2, 7) == pytest.approx(0.60, abs=TOL)


def test_change_ratio_no_change():
    assert change_ratio(4, 4, 2, 8) == 0.0


def test_change_ratio_antisymmetric():
    rng = random.Random(21)
    for _ in range(200):
        lower = rng.uniform(1, 5)
        upper = rng.uniform(lower + 0.5, 10)
        a = rng.uniform(lower, upper)
        b = rng.uniform(lower, upper)
        assert change_ratio(a, b, lower, upper) == pytest.approx(
            -change_ratio(b, a, lower, upper), abs=TOL)


def test_recalibrate_reference_example():
    c = DimensionCalibration(v_ref=2.0)
    c2 = recalibrate(c, 5.0, 8.0)
    assert map_slider(c2, 5.0) == pytest.approx(8.0, abs=TOL)
    assert map_slider(c2, 10.0) == pytest.approx(10.0, abs=TOL)
    assert map_slider(c2, -10.0) == pytest.approx(1.0, abs=TOL)


def test_recalibrate_fixed_point():
    c = DimensionCalibration(v_ref=3.5, s_ref=1.0)
    assert recalibrate(c, c.s_ref, c.v_ref) == c


def test_recalibrate_preserves_monotonicity():
    rng = random.Random(4242)
    for _ in range(200):
        c = _random_calibration(rng)
        c2 = recalibrate(c, rng.uniform(-9.9, 9.9), rng.uniform(1, 10))
        samples = sorted(rng.uniform(-10, 10) for _ in range(50))
        values = [map_slider(c2, s) for s in samples]
        assert all(a <= b + TOL for a, b in zip(values, values[1:]))


def test_recalibrate_at_endpoint_is_degenerate():
    c = DimensionCalibration(v_ref=2.0)
    with pytest.raises(DegenerateCalibration):
        recalibrate(c, 10.0, 5.0)


def test_recalibrate_outside_range():
    c = DimensionCalibration(v_ref=2.0)
    with pytest.raises(SliderOutOfRange):
        recalibrate(c, 11.0, 5.0)


def _space(lower=(2, 2), upper=(8, 7), baseline=(3, 2)) -> TransformSpace:
    return TransformSpace(
        baseline=ParamPoint(*baseline),
        lower_anchor=ParamPoint(*lower),
        upper_anchor=ParamPoint(*upper),
        calib_detail=DimensionCalibration(v_ref=float(baseline[0])),
        calib_expr=DimensionCalibration(v_ref=float(baseline[1])),
    )


def test_clamp_above():
    assert clamp_to_anchors(_space(), ParamPoint(9, 9)) == ParamPoint(8, 7)


def test_clamp_identity_inside():
    p = ParamPoint(4, 5)
    assert clamp_to_anchors(_space(), p) == p


def test_clamp_single_axis():
    assert clamp_to_anchors(_space(), ParamPoint(1, 5)) == ParamPoint(2, 5)


def test_space_rejects_equal_anchors():
    with pytest.raises(InvalidAnchorOrder):
        _space(lower=(2, 2), upper=(2, 7), baseline=(2, 3))


def test_space_rejects_baseline_outside():
    with pytest.raises(InvalidAnchorOrder):
        _space(baseline=(9, 3))


def test_param_point_range_checked():
    with pytest.raises(ValueError):
        ParamPoint(0.5, 5)
    with pytest.raises(ValueError):
        ParamPoint(5, 10.5)


def test_ratio_pair_range_checked():
    with pytest.raises(ValueError):
        RatioPair(r=1.2, delta=0.0)
    with pytest.raises(ValueError):
        RatioPair(r=0.5, delta=-1.5)
