from __future__ import annotations

import pytest

from captune import (
    CaptionCue,
    CueKind,
    DimensionCalibration,
    ParamPoint,
    SoundRepresentation,
    TransformSpace,
    VideoMetadata,
    ViewerPrefs,
    build_request,
    quantify,
    render_prompt,
)
from captune.errors import LockedCue, NotNsi, OutOfAnchorBounds
from captune.prompting import as_percent

JAMIE_SPACE = TransformSpace(
    baseline=ParamPoint(3, 2),
    lower_anchor=ParamPoint(2, 2),
    upper_anchor=ParamPoint(8, 7),
    calib_detail=DimensionCalibration(v_ref=3.0),
    calib_expr=DimensionCalibration(v_ref=2.0),
)
META = VideoMetadata(title="Bella", genre="Animation",
                     synopsis="A stray cat's journey toward adoption.")


def _thunder_cue(locked=False):
    return CaptionCue(index=1, start_ms=1000, end_ms=3200,
                      text="[Loud thunder sound]", kind=CueKind.NSI,
                      locked=locked)


def _request(target=(6, 5), representation=SoundRepresentation.DEFAULT,
             genre=False, **kwargs):
    prefs = ViewerPrefs(target=ParamPoint(*target), representation=representation,
                        genre_aligned=genre)
    return build_request(_thunder_cue(), JAMIE_SPACE, prefs, META, **kwargs)


def test_quantify_worked_example():
    detail, expr = quantify(JAMIE_SPACE, ParamPoint(3, 2), ParamPoint(6, 5))
    assert round(detail.r, 2) == 0.67
    assert round(detail.delta, 2) == 0.50
    assert round(expr.r, 2) == 0.60
    assert round(expr.delta, 2) == 0.60


def test_quantify_no_change_gives_zero_deltas():
    detail, expr = quantify(JAMIE_SPACE, ParamPoint(4, 4), ParamPoint(4, 4))
    assert detail.delta == 0.0
    assert expr.delta == 0.0


def test_quantify_lower_anchor_gives_zero_ratio():
    detail, expr = quantify(JAMIE_SPACE, ParamPoint(3, 2), ParamPoint(2, 2))
    assert detail.r == 0.0
    assert expr.r == 0.0


def test_quantify_out_of_bounds():
    with pytest.raises(OutOfAnchorBounds):
        quantify(JAMIE_SPACE, ParamPoint(3, 2), ParamPoint(9, 5))


def test_prompt_contains_worked_example_triples():
    prompt = render_prompt(_request())
    lines = prompt.splitlines()
    detail_at = lines.index("-- Level of Detail")
    expr_at = lines.index("-- Expressiveness")
    assert lines[detail_at + 1].endswith("67%")
    assert lines[detail_at + 2].endswith("33%")
    assert lines[detail_at + 3].endswith("+50%")
    assert lines[expr_at + 1].endswith("60%")
    assert lines[expr_at + 2].endswith("40%")
    assert lines[expr_at + 3].endswith("+60%")


def test_prompt_is_deterministic():
    req = _request(genre=True)
    assert render_prompt(req) == render_prompt(req)


def test_prompt_zero_change_and_no_genre_directive():
    prompt = render_prompt(_request(target=(3, 2)))
    assert "requested change: 0%" in prompt
    assert "Genre alignment" not in prompt


def test_prompt_genre_directive_present_when_on():
    prompt = render_prompt(_request(genre=True))
    assert "Genre alignment" in prompt
    assert "'Animation'" in prompt


def test_prompt_names_exactly_one_representation():
    directives = {
        SoundRepresentation.DEFAULT: "default way",
        SoundRepresentation.SOURCE_FOCUSED: "source that is making",
        SoundRepresentation.ONOMATOPOEIA: "phonetic imitation",
        SoundRepresentation.SENSORY_QUALITY: "sensory qualities",
    }
    for mode, marker in directives.items():
        prompt = render_prompt(_request(representation=mode))
        assert marker in prompt
        for other, other_marker in directives.items():
            if other is not mode:
                assert other_marker not in prompt


def test_prompt_includes_anchor_texts_and_context():
    req = _request(lower_anchor_text="[Thunder]",
                   upper_anchor_text="[Deep thunder rolls across the sky]",
                   scene_context="stormy night")
    prompt = render_prompt(req)
    assert "Minimal-anchor caption: [Thunder]" in prompt
    assert "Maximal-anchor caption: [Deep thunder rolls across the sky]" in prompt
    assert "Scene context: stormy night" in prompt


def test_prompt_omits_absent_anchor_texts():
    prompt = render_prompt(_request())
    assert "Minimal-anchor" not in prompt
    assert "Maximal-anchor" not in prompt


def test_percent_pair_sums_to_hundred():
    for i in range(0, 61):
        r = i / 60
        total = as_percent(r) + as_percent(1 - r)
        assert total in (100, 101)


def test_percent_rounds_half_up():
    assert as_percent(0.665) == 67
    assert as_percent(0.5) == 50
    assert as_percent(0.005) == 1
    assert as_percent(-0.335) == -34


def test_build_request_rejects_locked_cue():
    prefs = ViewerPrefs(target=ParamPoint(6, 5))
    with pytest.raises(LockedCue):
        build_request(_thunder_cue(locked=True), JAMIE_SPACE, prefs, META)


def test_build_request_rejects_speech_cue():
    cue = CaptionCue(index=2, start_ms=0, end_ms=500, text="Hello.",
                     kind=CueKind.SPEECH)
    prefs = ViewerPrefs(target=ParamPoint(6, 5))
    with pytest.raises(NotNsi):
        build_request(cue, JAMIE_SPACE, prefs, META)


def test_build_request_ratios_match_quantify():
    req = _request(target=(7, 4))
    detail, expr = quantify(JAMIE_SPACE, JAMIE_SPACE.baseline, ParamPoint(7, 4))
    assert req.detail == detail
    assert req.expressiveness == expr
    assert req.current_values == JAMIE_SPACE.baseline
