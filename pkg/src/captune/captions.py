"""SubRip (.srt) parsing, serialization, and non-speech cue detection.

An SRT track is a sequence of blocks separated by blank lines:

    1
    00:00:01,000 --> 00:00:02,500
    [Loud thunder sound]

Cues whose full trimmed text is wrapped in brackets or parentheses carry
non-speech information (NSI) and are the only cues the transformation
pipeline ever touches; everything else is speech and passes through
untouched.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmptyFile, MalformedCue, MalformedTimestamp, NonMonotonicCue

logger = logging.getLogger(__name__)

_TIMESTAMP_RE = re.compile(r"^(\d{2}):(\d{2}):(\d{2}),(\d{3})$")
_TIMING_RE = re.compile(r"^(\S+)\s+-->\s+(\S+)$")


class CueKind(str, Enum):
    SPEECH = "speech"
    NSI = "nsi"


class NsiCategory(str, Enum):
    CHARACTER_SOUND = "character_sound"
    MUSIC = "music"
    ENVIRONMENT_SOUND = "environment_sound"
    PARALINGUISTIC = "paralinguistic"
    OTHER = "other"


@dataclass
class CaptionCue:
    """One timed subtitle entry; ``text`` may span several lines."""

    index: int
    start_ms: int
    end_ms: int
    text: str
    kind: CueKind = CueKind.SPEECH
    category: NsiCategory | None = None
    locked: bool = False

    @property
    def is_nsi(self) -> bool:
        return self.kind is CueKind.NSI


@dataclass
class CaptionTrack:
    """Ordered caption cues plus the name of the file they came from."""

    cues: list[CaptionCue] = field(default_factory=list)
    source_name: str = ""

    def nsi_cues(self) -> list[CaptionCue]:
        return [c for c in self.cues if c.is_nsi]

    def get(self, index: int) -> CaptionCue | None:
        for cue in self.cues:
            if cue.index == index:
                return cue
        return None


# Keyword tables for the category heuristic. The tagger is intentionally a
# transparent lookup so its decisions can be audited cue by cue.
_MUSIC_WORDS = frozenset({
    "music", "song", "singing", "melody", "tune", "theme", "piano", "violin",
    "guitar", "drums", "orchestra", "humming", "chorus", "synth",
})
_CHARACTER_WORDS = frozenset({
    "meow", "meows", "meowing", "purr", "purrs", "purring", "panting",
    "pants", "bark", "barks", "barking", "growl", "growls", "growling",
    "whimper", "whimpers", "whimpering", "whine", "whines", "whining",
    "chirp", "chirps", "chirping", "squeak", "squeaks", "squeaking",
    "roar", "roars", "roaring", "hiss", "hisses", "hissing",
    "snort", "snorts", "snorting",
})
_PARALINGUISTIC_WORDS = frozenset({
    "whisper", "whispers", "whispering", "sigh", "sighs", "sighing",
    "gasp", "gasps", "gasping", "laugh", "laughs", "laughing", "laughter",
    "chuckle", "chuckles", "chuckling", "sob", "sobs", "sobbing",
    "crying", "cries", "exhales", "inhales", "groan", "groans", "groaning",
})
_ENVIRONMENT_WORDS = frozenset({
    "slam", "slams", "slamming", "crash", "crashes", "crashing", "bang",
    "bangs", "banging", "knock", "knocks", "knocking", "creak", "creaks",
    "creaking", "rumble", "rumbles", "rumbling", "rustle", "rustles",
    "rustling", "thud", "thuds", "thunder", "rain", "raining", "pattering",
    "wind", "blowing", "gust", "gusts", "door", "doors", "footsteps",
    "engine", "explosion", "siren", "clatter", "splash", "splashes",
    "splashing", "whistle", "whistles", "whistling", "dripping", "buzzing",
    "ringing", "rings", "gunshot", "gunshots", "gunfire", "waves", "fire",
    "crackling", "honking", "alarm", "static",
})

# Speaker-plus-adverb tone markers, e.g. "John, sarcastically".
_SPEAKER_ADVERB_RE = re.compile(r"^[A-Z][\w'.-]*,\s+\w+ly$")


def detect_nsi(cue_text: str) -> tuple[CueKind, NsiCategory | None]:
    """Classify a cue text as speech or NSI and, for NSI, pick a category.

    Only full-text wrapping counts: inline brackets inside dialogue leave
    the cue as speech so speaker labels are never mangled.
    """
    text = cue_text.strip()
    wrapped = (
        (text.startswith("[") and text.endswith("]"))
        or (text.startswith("(") and text.endswith(")"))
    )
    if not wrapped or len(text) < 2:
        return CueKind.SPEECH, None

    inner = text[1:-1].strip()
    if _SPEAKER_ADVERB_RE.match(inner):
        return CueKind.NSI, NsiCategory.PARALINGUISTIC

    words = [w.strip(".,!?;:'\"").lower() for w in inner.split()]
    if any(w in _CHARACTER_WORDS for w in words):
        return CueKind.NSI, NsiCategory.CHARACTER_SOUND
    if any(w in _MUSIC_WORDS for w in words):
        return CueKind.NSI, NsiCategory.MUSIC
    if any(w in _PARALINGUISTIC_WORDS for w in words):
        return CueKind.NSI, NsiCategory.PARALINGUISTIC
    if any(w in _ENVIRONMENT_WORDS for w in words):
        return CueKind.NSI, NsiCategory.ENVIRONMENT_SOUND
    return CueKind.NSI, NsiCategory.OTHER


def timestamp_to_ms(value: str, line: int = 0) -> int:
    """Parse ``HH:MM:SS,mmm`` to milliseconds; reject anything else."""
    m = _TIMESTAMP_RE.match(value)
    if not m:
        raise MalformedTimestamp(
            f"line {line}: expected HH:MM:SS,mmm timestamp, got {value!r}",
            line=line, value=value,
        )
    hours, minutes, seconds, millis = (int(g) for g in m.groups())
    if minutes > 59 or seconds > 59:
        raise MalformedTimestamp(
            f"line {line}: minutes/seconds out of range in {value!r}",
            line=line, value=value,
        )
    return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis


def ms_to_timestamp(ms: int) -> str:
    if ms < 0:
        raise ValueError(f"negative timestamp: {ms}")
    seconds, millis = divmod(ms, 1000)
    minutes, seconds = divmod(seconds, 60)
    hours, minutes = divmod(minutes, 60)
    return f"{hours:02d}:{minutes:02d}:{seconds:02d},{millis:03d}"


def parse_srt(data: bytes | str, *, lenient: bool = False,
              source_name: str = "") -> CaptionTrack:
    """Parse SRT input into a CaptionTrack.

    Strict mode (default) raises on the first malformed block or ordering
    violation; ``lenient`` skips bad blocks with a warning instead. A BOM
    is tolerated and both LF and CRLF line endings are accepted.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8-sig")
    else:
        text = data.lstrip("﻿")
    lines = text.splitlines()
    if not any(line.strip() for line in lines):
        raise EmptyFile("no cues found in input", line=1)

    cues: list[CaptionCue] = []
    prev_index = 0
    prev_start = -1
    pos = 0
    total = len(lines)

    while pos < total:
        if not lines[pos].strip():
            pos += 1
            continue
        block_start = pos

        try:
            index_line = lines[pos].strip()
            try:
                index = int(index_line)
            except ValueError:
                raise MalformedCue(
                    f"line {pos + 1}: cue block must start with an integer "
                    f"index, got {index_line!r}",
                    line=pos + 1,
                ) from None
            pos += 1

            if pos >= total or not lines[pos].strip():
                raise MalformedTimestamp(
                    f"line {pos + 1}: missing timing line", line=pos + 1)
            timing = _TIMING_RE.match(lines[pos].strip())
            if not timing:
                raise MalformedTimestamp(
                    f"line {pos + 1}: expected 'start --> end' timing, got "
                    f"{lines[pos].strip()!r}",
                    line=pos + 1,
                )
            start_ms = timestamp_to_ms(timing.group(1), line=pos + 1)
            end_ms = timestamp_to_ms(timing.group(2), line=pos + 1)
            pos += 1

            text_lines = []
            while pos < total and lines[pos].strip():
                text_lines.append(lines[pos])
                pos += 1
            if not text_lines:
                raise MalformedCue(
                    f"line {pos + 1}: cue {index} has no text", line=pos + 1,
                    index=index,
                )

            if index < 1 or index <= prev_index:
                raise NonMonotonicCue(
                    f"line {block_start + 1}: cue index {index} does not "
                    f"increase (previous was {prev_index})",
                    index=index, line=block_start + 1,
                )
            if end_ms <= start_ms:
                raise NonMonotonicCue(
                    f"line {block_start + 2}: cue {index} ends at or before "
                    f"its start",
                    index=index, line=block_start + 2,
                )
            if start_ms < prev_start:
                raise NonMonotonicCue(
                    f"line {block_start + 2}: cue {index} starts before the "
                    f"previous cue",
                    index=index, line=block_start + 2,
                )
        except (MalformedCue, MalformedTimestamp, NonMonotonicCue) as exc:
            if not lenient:
                raise
            logger.warning("skipping malformed cue block: %s", exc.message)
            # Resync at the next blank line.
            while pos < total and lines[pos].strip():
                pos += 1
            continue

        cue_text = "\n".join(text_lines)
        kind, category = detect_nsi(cue_text)
        cues.append(CaptionCue(
            index=index, start_ms=start_ms, end_ms=end_ms, text=cue_text,
            kind=kind, category=category,
        ))
        prev_index = index
        prev_start = start_ms

    if not cues and not lenient:
        raise EmptyFile("no cues found in input", line=1)
    return CaptionTrack(cues=cues, source_name=source_name)


def serialize_srt(track: CaptionTrack, *, crlf: bool = False) -> bytes:
    """Render a track as canonical SRT bytes (UTF-8, LF by default)."""
    blocks = []
    for cue in track.cues:
        blocks.append(
            f"{cue.index}\n"
            f"{ms_to_timestamp(cue.start_ms)} --> {ms_to_timestamp(cue.end_ms)}\n"
            f"{cue.text}\n"
        )
    payload = "\n".join(blocks)
    if crlf:
        payload = payload.replace("\n", "\r\n")
    return payload.encode("utf-8")
