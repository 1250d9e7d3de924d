"""Assembly of fully quantified transformation orders.

Every transformation a backend performs is driven by a TransformRequest:
the original caption, the creator's anchor examples, per-dimension
interpolation and change ratios, the sound-representation mode, the genre
flag, and scene context. The rendered prompt spells the ratios out as
integer percentages so the request leaves no room for interpretation.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

from .captions import CaptionCue
from .errors import LockedCue, NotNsi
from .space import (
    ParamPoint,
    RatioPair,
    TransformSpace,
    change_ratio,
    interpolation_ratio,
)

# Bumped whenever the rendered template changes, and stored in exported
# configs so old projects replay against the template they were built with.
PROMPT_VERSION = "1"


class SoundRepresentation(str, Enum):
    DEFAULT = "default"
    SOURCE_FOCUSED = "source_focused"
    ONOMATOPOEIA = "onomatopoeia"
    SENSORY_QUALITY = "sensory_quality"


REPRESENTATION_LABELS = {
    SoundRepresentation.DEFAULT: "Default",
    SoundRepresentation.SOURCE_FOCUSED: "Source-focused",
    SoundRepresentation.ONOMATOPOEIA: "Onomatopoeia",
    SoundRepresentation.SENSORY_QUALITY: "Sensory Quality-focused",
}

_REPRESENTATION_DIRECTIVES = {
    SoundRepresentation.DEFAULT:
        "keep the creator's default way of depicting the sound",
    SoundRepresentation.SOURCE_FOCUSED:
        "emphasize the source that is making the sound",
    SoundRepresentation.ONOMATOPOEIA:
        "represent the sound with a phonetic imitation",
    SoundRepresentation.SENSORY_QUALITY:
        "describe sensory qualities of the sound such as pitch, texture, and intensity",
}


@dataclass(frozen=True)
class VideoMetadata:
    title: str = ""
    genre: str = ""
    synopsis: str = ""


@dataclass(frozen=True)
class ViewerPrefs:
    """Effective viewer-side customization state."""

    target: ParamPoint
    representation: SoundRepresentation = SoundRepresentation.DEFAULT
    genre_aligned: bool = False


@dataclass(frozen=True)
class TransformRequest:
    original_text: str
    detail: RatioPair
    expressiveness: RatioPair
    representation: SoundRepresentation
    genre_aligned: bool
    metadata: VideoMetadata
    target_values: ParamPoint
    current_values: ParamPoint
    lower_anchor_text: str | None = None
    upper_anchor_text: str | None = None
    scene_context: str | None = None


def as_percent(ratio: float) -> int:
    """Integer percent with round-half-up (0.665 -> 67, -0.335 -> -34)."""
    return int(Decimal(repr(ratio * 100)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def quantify(space: TransformSpace, current: ParamPoint,
             target: ParamPoint) -> tuple[RatioPair, RatioPair]:
    """Ratios for both dimensions, computed independently against the anchors."""
    detail = RatioPair(
        r=interpolation_ratio(target.detail, space.lower_anchor.detail,
                              space.upper_anchor.detail),
        delta=change_ratio(target.detail, current.detail,
                           space.lower_anchor.detail, space.upper_anchor.detail),
    )
    expressiveness = RatioPair(
        r=interpolation_ratio(target.expressiveness,
                              space.lower_anchor.expressiveness,
                              space.upper_anchor.expressiveness),
        delta=change_ratio(target.expressiveness, current.expressiveness,
                           space.lower_anchor.expressiveness,
                           space.upper_anchor.expressiveness),
    )
    return detail, expressiveness


def _signed_percent(value: int) -> str:
    return f"+{value}%" if value > 0 else f"{value}%"


def _dimension_block(name: str, pair: RatioPair) -> list[str]:
    from_lower = as_percent(pair.r)
    from_upper = as_percent(1.0 - pair.r)
    change = as_percent(pair.delta)
    return [
        f"-- {name}",
        f"   distance from minimal anchor: {from_lower}%",
        f"   distance from maximal anchor: {from_upper}%",
        f"   requested change: {_signed_percent(change)}",
    ]


def render_prompt(req: TransformRequest) -> str:
    """Deterministic transformation order; equal requests render byte-equal."""
    lines = ["Please transform the current caption based on the following specifications:", ""]
    lines += _dimension_block("Level of Detail", req.detail)
    lines += _dimension_block("Expressiveness", req.expressiveness)
    lines.append(
        f"-- Sound representation: {_REPRESENTATION_DIRECTIVES[req.representation]}")
    if req.genre_aligned:
        lines.append(
            f"-- Genre alignment: match the tone and style of the "
            f"{req.metadata.genre!r} genre")
    lines.append("")
    lines.append(f"Current caption: {req.original_text}")
    if req.lower_anchor_text:
        lines.append(f"Minimal-anchor caption: {req.lower_anchor_text}")
    if req.upper_anchor_text:
        lines.append(f"Maximal-anchor caption: {req.upper_anchor_text}")
    if req.scene_context:
        lines.append(f"Scene context: {req.scene_context}")
    meta = req.metadata
    if meta.title or meta.genre or meta.synopsis:
        parts = [f"Video: {meta.title!r}"]
        if meta.genre:
            parts.append(f"({meta.genre})")
        described = " ".join(parts)
        if meta.synopsis:
            described += f" - {meta.synopsis}"
        lines.append(described)
    lines.append("")
    lines.append(
        "Respond with exactly one transformed caption line, keeping the "
        "original bracket style.")
    return "\n".join(lines)


def build_request(cue: CaptionCue, space: TransformSpace, prefs: ViewerPrefs,
                  metadata: VideoMetadata, scene_context: str | None = None, *,
                  current: ParamPoint | None = None,
                  lower_anchor_text: str | None = None,
                  upper_anchor_text: str | None = None) -> TransformRequest:
    """Assemble the transformation order for one NSI cue.

    ``current`` defaults to the space baseline; the service passes the
    per-cue estimate when the project recorded one.
    """
    if not cue.is_nsi:
        raise NotNsi(f"cue {cue.index} is not a non-speech cue", index=cue.index)
    if cue.locked:
        raise LockedCue(f"cue {cue.index} is locked", index=cue.index)
    if current is None:
        current = space.baseline
    detail, expressiveness = quantify(space, current, prefs.target)
    return TransformRequest(
        original_text=cue.text,
        detail=detail,
        expressiveness=expressiveness,
        representation=prefs.representation,
        genre_aligned=prefs.genre_aligned,
        metadata=metadata,
        target_values=prefs.target,
        current_values=current,
        lower_anchor_text=lower_anchor_text,
        upper_anchor_text=upper_anchor_text,
        scene_context=scene_context,
    )
