from __future__ import annotations

import pytest

from captune import (
    CaptionCue,
    CaptionTrack,
    CueKind,
    NsiCategory,
    detect_nsi,
    parse_srt,
    serialize_srt,
)
from captune.captions import ms_to_timestamp, timestamp_to_ms
from captune.errors import EmptyFile, MalformedCue, MalformedTimestamp, NonMonotonicCue

from conftest import srt_corpus_paths, srt_malformed_paths


def test_parse_single_nsi_cue():
    track = parse_srt("1\n00:00:01,000 --> 00:00:02,500\n[Loud thunder sound]\n")
    assert len(track.cues) == 1
    cue = track.cues[0]
    assert cue.index == 1
    assert cue.start_ms == 1000
    assert cue.end_ms == 2500
    assert cue.text == "[Loud thunder sound]"
    assert cue.kind is CueKind.NSI
    assert not cue.locked


def test_parse_empty_string_raises():
    with pytest.raises(EmptyFile) as excinfo:
        parse_srt("")
    assert excinfo.value.details["line"] == 1


def test_parse_blank_only_raises():
    with pytest.raises(EmptyFile):
        parse_srt("\n\n   \n")


@pytest.mark.parametrize("path", srt_corpus_paths(), ids=lambda p: p.name)
def test_round_trip_corpus(path):
    track = parse_srt(path.read_bytes(), source_name=path.name)
    reparsed = parse_srt(serialize_srt(track), source_name=path.name)
    assert reparsed.cues == track.cues


def test_round_trip_crlf_serialization():
    track = parse_srt((srt_corpus_paths()[0]).read_bytes())
    assert parse_srt(serialize_srt(track, crlf=True)).cues == track.cues


def test_serialize_zero_timestamp():
    track = CaptionTrack(cues=[CaptionCue(1, 0, 500, "[Wind]", CueKind.NSI,
                                          NsiCategory.ENVIRONMENT_SOUND)])
    assert serialize_srt(track).startswith(b"1\n00:00:00,000 --> 00:00:00,500\n")


def test_serialize_preserves_multiline_text():
    text = "first line\nsecond line"
    track = CaptionTrack(cues=[CaptionCue(1, 0, 1000, text)])
    assert parse_srt(serialize_srt(track)).cues[0].text == text


def test_bom_tolerated():
    data = b"\xef\xbb\xbf1\n00:00:01,000 --> 00:00:02,000\nHi.\n"
    track = parse_srt(data)
    assert track.cues[0].text == "Hi."


def test_parse_keeps_input_order():
    track = parse_srt((srt_corpus_paths()[16]).read_bytes())  # v17_long_track
    starts = [c.start_ms for c in track.cues]
    assert starts == sorted(starts)
    assert [c.index for c in track.cues] == list(range(1, 16))


# --- NSI detection -----------------------------------------------------------

def test_detect_music_category():
    assert detect_nsi("[SOFT PIANO MUSIC RISING]") == (CueKind.NSI, NsiCategory.MUSIC)


def test_detect_speech():
    assert detect_nsi("Hello there.") == (CueKind.SPEECH, None)


def test_detect_environment_sound():
    assert detect_nsi("(door slams)") == (CueKind.NSI, NsiCategory.ENVIRONMENT_SOUND)


def test_detect_character_sound():
    assert detect_nsi("[Weak, sorrow meowing from alley]") == (
        CueKind.NSI, NsiCategory.CHARACTER_SOUND)
    assert detect_nsi("[CAUTIOUS, WEARY PURRING]") == (
        CueKind.NSI, NsiCategory.CHARACTER_SOUND)


def test_detect_speaker_adverb_is_paralinguistic():
    assert detect_nsi("[John, sarcastically]") == (
        CueKind.NSI, NsiCategory.PARALINGUISTIC)


def test_detect_unknown_bracketed_is_other():
    assert detect_nsi("[Something odd]") == (CueKind.NSI, NsiCategory.OTHER)


def test_inline_brackets_stay_speech():
    assert detect_nsi("He said [quote] and left.") == (CueKind.SPEECH, None)


def test_detect_is_pure():
    for text in ("[Loud thunder sound]", "Hello.", "(door slams)"):
        assert detect_nsi(text) == detect_nsi(text)


# --- malformed inputs --------------------------------------------------------

_EXPECTED_ERRORS = {
    "bad_timestamp.srt": (MalformedTimestamp, 2),
    "bad_timing_arrow.srt": (MalformedTimestamp, 2),
    "nonmonotonic_index.srt": (NonMonotonicCue, 5),
    "nonmonotonic_time.srt": (NonMonotonicCue, 6),
    "end_before_start.srt": (NonMonotonicCue, 2),
    "empty.srt": (EmptyFile, 1),
    "blank_only.srt": (EmptyFile, 1),
    "missing_text.srt": (MalformedCue, 3),
    "bad_index.srt": (MalformedCue, 1),
}


@pytest.mark.parametrize("path", srt_malformed_paths(), ids=lambda p: p.name)
def test_malformed_fixtures_raise_declared_errors(path):
    expected_type, expected_line = _EXPECTED_ERRORS[path.name]
    with pytest.raises(expected_type) as excinfo:
        parse_srt(path.read_bytes())
    assert excinfo.value.details["line"] == expected_line


def test_nonmonotonic_error_carries_index():
    path = next(p for p in srt_malformed_paths() if p.name == "nonmonotonic_index.srt")
    with pytest.raises(NonMonotonicCue) as excinfo:
        parse_srt(path.read_bytes())
    assert excinfo.value.details["index"] == 1


def test_lenient_skips_bad_blocks():
    path = next(p for p in srt_malformed_paths() if p.name == "nonmonotonic_index.srt")
    track = parse_srt(path.read_bytes(), lenient=True)
    assert [c.index for c in track.cues] == [2]


def test_lenient_all_bad_gives_empty_track():
    path = next(p for p in srt_malformed_paths() if p.name == "bad_timestamp.srt")
    assert parse_srt(path.read_bytes(), lenient=True).cues == []


# --- timestamp helpers --------------------------------------------------------

def test_timestamp_round_trip():
    for ms in (0, 999, 1000, 3_599_999, 3_600_000, 359_999_999):
        assert timestamp_to_ms(ms_to_timestamp(ms)) == ms


def test_timestamp_rejects_dot_separator():
    with pytest.raises(MalformedTimestamp):
        timestamp_to_ms("00:00:01.000", line=3)


def test_timestamp_rejects_overflowing_fields():
    with pytest.raises(MalformedTimestamp):
        timestamp_to_ms("00:61:00,000")
