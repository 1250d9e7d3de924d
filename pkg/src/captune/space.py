"""Two-dimensional transformation-space math.

A creator bounds viewer customization with a lower and an upper anchor on
the (level of detail, expressiveness) plane. Slider positions in the
symmetric UI range map to semantic parameter values through a piecewise
linear curve pinned at a movable reference pair, and every requested value
is quantified against the anchor interval as an interpolation ratio plus a
normalized change ratio.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    DegenerateCalibration,
    InvalidAnchorOrder,
    OutOfAnchorBounds,
    SliderOutOfRange,
)

VALUE_MIN = 1.0
VALUE_MAX = 10.0
SLIDER_MIN = -10.0
SLIDER_MAX = 10.0


@dataclass(frozen=True)
class ParamPoint:
    """A (level of detail, expressiveness) pair on the semantic 1-10 scale."""

    detail: float
    expressiveness: float

    def __post_init__(self):
        for name, v in (("detail", self.detail),
                        ("expressiveness", self.expressiveness)):
            if not VALUE_MIN <= v <= VALUE_MAX:
                raise ValueError(f"{name} must be in [{VALUE_MIN}, {VALUE_MAX}], got {v}")


@dataclass(frozen=True)
class DimensionCalibration:
    """Slider-to-value mapping state for one dimension.

    The curve runs linearly from (s_min, v_min) up to the reference pair
    (s_ref, v_ref) and on to (s_max, v_max). Initially the reference sits
    at slider 0 with the baseline value; recalibration moves it.
    """

    v_ref: float
    s_ref: float = 0.0
    v_min: float = VALUE_MIN
    v_max: float = VALUE_MAX
    s_min: float = SLIDER_MIN
    s_max: float = SLIDER_MAX

    def __post_init__(self):
        if not self.s_min < self.s_ref < self.s_max:
            raise DegenerateCalibration(
                f"slider reference {self.s_ref} must lie strictly inside "
                f"[{self.s_min}, {self.s_max}]",
                s_ref=self.s_ref,
            )
        if not self.v_min <= self.v_ref <= self.v_max:
            raise ValueError(
                f"reference value {self.v_ref} outside [{self.v_min}, {self.v_max}]")


@dataclass(frozen=True)
class RatioPair:
    """Interpolation ratio r in [0,1] and normalized change ratio in [-1,1]."""

    r: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"interpolation ratio out of [0,1]: {self.r}")
        if not -1.0 <= self.delta <= 1.0:
            raise ValueError(f"change ratio out of [-1,1]: {self.delta}")


@dataclass(frozen=True)
class TransformSpace:
    """Baseline, anchors, and per-dimension slider calibrations."""

    baseline: ParamPoint
    lower_anchor: ParamPoint
    upper_anchor: ParamPoint
    calib_detail: DimensionCalibration
    calib_expr: DimensionCalibration

    def __post_init__(self):
        for dim in ("detail", "expressiveness"):
            lo = getattr(self.lower_anchor, dim)
            hi = getattr(self.upper_anchor, dim)
            base = getattr(self.baseline, dim)
            if not lo < hi:
                raise InvalidAnchorOrder(
                    f"{dim}: lower anchor {lo} must be strictly below upper "
                    f"anchor {hi}",
                    dimension=dim, lower=lo, upper=hi,
                )
            if not lo <= base <= hi:
                raise InvalidAnchorOrder(
                    f"{dim}: baseline {base} outside anchors [{lo}, {hi}]",
                    dimension=dim, lower=lo, upper=hi, baseline=base,
                )

    def contains(self, p: ParamPoint) -> bool:
        return (
            self.lower_anchor.detail <= p.detail <= self.upper_anchor.detail
            and self.lower_anchor.expressiveness <= p.expressiveness
            <= self.upper_anchor.expressiveness
        )


def default_calibration(v_ref: float) -> DimensionCalibration:
    """Calibration with the reference at slider 0 and the baseline value."""
    return DimensionCalibration(v_ref=v_ref)


def map_slider(c: DimensionCalibration, s: float) -> float:
    """Map a slider position to a parameter value.

    Piecewise linear: for s below the reference the value interpolates
    between (s_min, v_min) and (s_ref, v_ref); above it, between
    (s_ref, v_ref) and (s_max, v_max).
    """
    if not c.s_min <= s <= c.s_max:
        raise SliderOutOfRange(
            f"slider {s} outside [{c.s_min}, {c.s_max}]", slider=s)
    if s == c.s_ref:
        return c.v_ref
    if s < c.s_ref:
        return c.v_min + (s - c.s_min) / (c.s_ref - c.s_min) * (c.v_ref - c.v_min)
    return c.v_ref + (s - c.s_ref) / (c.s_max - c.s_ref) * (c.v_max - c.v_ref)


def interpolation_ratio(v_new: float, lower: float, upper: float) -> float:
    """Position of a requested value between the anchors, in [0,1]."""
    if not lower < upper:
        raise InvalidAnchorOrder(
            f"lower {lower} must be strictly below upper {upper}",
            lower=lower, upper=upper,
        )
    if not lower <= v_new <= upper:
        raise OutOfAnchorBounds(
            f"value {v_new} outside anchors [{lower}, {upper}]",
            value=v_new, lower=lower, upper=upper,
        )
    return (v_new - lower) / (upper - lower)


def change_ratio(v_new: float, v_cur: float, lower: float, upper: float) -> float:
    """Signed magnitude of change relative to the anchor width, in [-1,1]."""
    if not lower < upper:
        raise InvalidAnchorOrder(
            f"lower {lower} must be strictly below upper {upper}",
            lower=lower, upper=upper,
        )
    for value in (v_new, v_cur):
        if not lower <= value <= upper:
            raise OutOfAnchorBounds(
                f"value {value} outside anchors [{lower}, {upper}]",
                value=value, lower=lower, upper=upper,
            )
    return (v_new - v_cur) / (upper - lower)


def recalibrate(c: DimensionCalibration, current_slider: float,
                reestimated_value: float) -> DimensionCalibration:
    """Pin the current slider position to a re-estimated parameter value.

    The endpoint pairs stay fixed, so the interface keeps its visual state
    while the curve absorbs the semantic shift.
    """
    if current_slider <= c.s_min or current_slider >= c.s_max:
        if current_slider == c.s_min or current_slider == c.s_max:
            raise DegenerateCalibration(
                f"cannot pin the mapping at slider endpoint {current_slider}",
                slider=current_slider,
            )
        raise SliderOutOfRange(
            f"slider {current_slider} outside [{c.s_min}, {c.s_max}]",
            slider=current_slider,
        )
    if not c.v_min <= reestimated_value <= c.v_max:
        raise ValueError(
            f"re-estimated value {reestimated_value} outside "
            f"[{c.v_min}, {c.v_max}]")
    return replace(c, s_ref=current_slider, v_ref=reestimated_value)


def clamp_to_anchors(space: TransformSpace, p: ParamPoint) -> ParamPoint:
    """Componentwise clamp into the anchor rectangle."""
    return ParamPoint(
        detail=min(max(p.detail, space.lower_anchor.detail),
                   space.upper_anchor.detail),
        expressiveness=min(max(p.expressiveness, space.lower_anchor.expressiveness),
                           space.upper_anchor.expressiveness),
    )
