"""Per-cue audio-visual context windows and their textual descriptions.

Video decoding and the audio-visual model behind scene descriptions are
represented only by the DescriberBackend interface; the sidecar stub reads
descriptions from a ``descriptions.json`` file (stringified cue index to
text) so the whole pipeline runs at desk scale.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .captions import CaptionCue
from .errors import ValidationFailed

CONTEXT_PAD_MS = 5000
DEFAULT_DESCRIPTION = "no scene description available"

# Fixed prompt a live describer sends alongside each clip.
DESCRIBER_PROMPT = "Can you describe the visual and audio content in this video clip?"


@dataclass(frozen=True)
class ContextWindow:
    cue_index: int
    window_start_ms: int
    window_end_ms: int
    description: str | None = None


class DescriberBackend(Protocol):
    def describe(self, window: ContextWindow) -> str:
        """Return a textual description of the window's scene."""
        ...


@dataclass
class SidecarDescriber:
    """Stub describer backed by a cue-index-to-text mapping."""

    descriptions: dict[int, str]

    def describe(self, window: ContextWindow) -> str:
        return self.descriptions.get(window.cue_index, DEFAULT_DESCRIPTION)


def compute_window(cue: CaptionCue, media_duration_ms: int | None = None) -> ContextWindow:
    """Window from 5 s before the cue start to 5 s after its end.

    Clamped to the media bounds: never negative, and never past the media
    duration when one is known, though the window always covers the cue
    itself even against an inconsistent duration.
    """
    start = max(0, cue.start_ms - CONTEXT_PAD_MS)
    end = cue.end_ms + CONTEXT_PAD_MS
    if media_duration_ms is not None:
        end = min(end, max(media_duration_ms, cue.end_ms))
    return ContextWindow(cue_index=cue.index, window_start_ms=start, window_end_ms=end)


def describe_window(window: ContextWindow, describer: DescriberBackend) -> str:
    return describer.describe(window)


class DescriptionCache:
    """Per-project description store: each window is described at most once.

    Readers may race freely; writes are serialized so a slow describer is
    only ever consulted once per cue.
    """

    def __init__(self, initial: dict[int, str] | None = None):
        self._entries: dict[int, str] = dict(initial or {})
        self._lock = threading.Lock()

    def get(self, cue_index: int) -> str | None:
        return self._entries.get(cue_index)

    def get_or_describe(self, window: ContextWindow, describer: DescriberBackend) -> str:
        cached = self._entries.get(window.cue_index)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._entries.get(window.cue_index)
            if cached is None:
                cached = describe_window(window, describer)
                self._entries[window.cue_index] = cached
        return cached

    def as_dict(self) -> dict[int, str]:
        return dict(self._entries)


def load_sidecar(path: str | Path) -> dict[int, str]:
    """Load a ``descriptions.json`` sidecar (stringified index -> text)."""
    raw = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationFailed("$", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationFailed("$", "sidecar must be a JSON object")
    out: dict[int, str] = {}
    for key, value in data.items():
        try:
            index = int(key)
        except ValueError:
            raise ValidationFailed(f"$.{key}", "keys must be stringified cue indices") from None
        if not isinstance(value, str):
            raise ValidationFailed(f"$.{key}", "descriptions must be strings")
        out[index] = value
    return out
