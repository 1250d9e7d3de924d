"""Project configuration export and loading.

The exported JSON file is the contract between the creator tool and the
viewer client: original captions, anchors and calibrations, per-cue anchor
preview texts, scene descriptions, per-cue estimates, and video metadata.
Exports are canonical (sorted keys, UTF-8, floats at most 6 decimal
places) so the same project always serializes to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .backends import Estimate
from .captions import CaptionCue, CaptionTrack, CueKind, NsiCategory, detect_nsi
from .errors import AnchorsNotSet, InvalidAnchorOrder, SchemaMismatch, ValidationFailed
from .prompting import PROMPT_VERSION, VideoMetadata
from .space import DimensionCalibration, ParamPoint, TransformSpace

SCHEMA_VERSION = "1"
KNOWN_SCHEMA_VERSIONS = {"1"}

_SCHEMA = json.loads(
    resources.files("captune").joinpath("config.schema.json").read_text("utf-8"))
_VALIDATOR = jsonschema.Draft202012Validator(_SCHEMA)


@dataclass(frozen=True)
class AnchorPreview:
    """Creator-accepted transformed captions at the two anchors."""

    lower_text: str | None = None
    upper_text: str | None = None


@dataclass
class ProjectConfig:
    original_track: CaptionTrack
    space: TransformSpace
    metadata: VideoMetadata
    anchor_preview_texts: dict[int, AnchorPreview] = field(default_factory=dict)
    context_descriptions: dict[int, str] = field(default_factory=dict)
    cue_estimates: dict[int, Estimate] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION
    prompt_version: str = PROMPT_VERSION


def build_config(*, track: CaptionTrack, metadata: VideoMetadata,
                 baseline: ParamPoint | None,
                 lower_anchor: ParamPoint | None,
                 upper_anchor: ParamPoint | None,
                 calib_detail: DimensionCalibration | None = None,
                 calib_expr: DimensionCalibration | None = None,
                 anchor_previews: dict[int, AnchorPreview] | None = None,
                 context_descriptions: dict[int, str] | None = None,
                 cue_estimates: dict[int, Estimate] | None = None) -> ProjectConfig:
    """Assemble a config from creator state; anchors must be finalized."""
    if baseline is None or lower_anchor is None or upper_anchor is None:
        raise AnchorsNotSet("baseline and both anchors must be set before export")
    space = TransformSpace(
        baseline=baseline,
        lower_anchor=lower_anchor,
        upper_anchor=upper_anchor,
        calib_detail=calib_detail or DimensionCalibration(v_ref=baseline.detail),
        calib_expr=calib_expr or DimensionCalibration(v_ref=baseline.expressiveness),
    )
    config = ProjectConfig(
        original_track=track,
        space=space,
        metadata=metadata,
        anchor_preview_texts=dict(anchor_previews or {}),
        context_descriptions=dict(context_descriptions or {}),
        cue_estimates=dict(cue_estimates or {}),
    )
    _check_cue_references(config)
    return config


def _round_floats(value):
    if isinstance(value, float):
        rounded = round(value, 6)
        return int(rounded) if rounded.is_integer() and abs(rounded) < 1e15 else rounded
    if isinstance(value, dict):
        return {k: _round_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v) for v in value]
    return value


def _point_dict(p: ParamPoint) -> dict:
    return {"detail": p.detail, "expressiveness": p.expressiveness}


def _calibration_dict(c: DimensionCalibration) -> dict:
    return {"v_ref": c.v_ref, "s_ref": c.s_ref, "v_min": c.v_min,
            "v_max": c.v_max, "s_min": c.s_min, "s_max": c.s_max}


def config_to_dict(config: ProjectConfig) -> dict:
    return {
        "schema_version": config.schema_version,
        "prompt_version": config.prompt_version,
        "metadata": {
            "title": config.metadata.title,
            "genre": config.metadata.genre,
            "synopsis": config.metadata.synopsis,
        },
        "original_track": {
            "source_name": config.original_track.source_name,
            "cues": [
                {
                    "index": cue.index,
                    "start_ms": cue.start_ms,
                    "end_ms": cue.end_ms,
                    "text": cue.text,
                    "kind": cue.kind.value,
                    "category": cue.category.value if cue.category else None,
                    "locked": cue.locked,
                }
                for cue in config.original_track.cues
            ],
        },
        "space": {
            "baseline": _point_dict(config.space.baseline),
            "lower_anchor": _point_dict(config.space.lower_anchor),
            "upper_anchor": _point_dict(config.space.upper_anchor),
            "calibration": {
                "detail": _calibration_dict(config.space.calib_detail),
                "expressiveness": _calibration_dict(config.space.calib_expr),
            },
        },
        "anchor_preview_texts": {
            str(index): {"lower_text": preview.lower_text,
                         "upper_text": preview.upper_text}
            for index, preview in sorted(config.anchor_preview_texts.items())
        },
        "context_descriptions": {
            str(index): text
            for index, text in sorted(config.context_descriptions.items())
        },
        "cue_estimates": {
            str(index): {"detail": est.detail, "expressiveness": est.expressiveness}
            for index, est in sorted(config.cue_estimates.items())
        },
    }


def export_config(config: ProjectConfig) -> bytes:
    """Serialize to canonical JSON bytes."""
    _check_cue_references(config)
    payload = _round_floats(config_to_dict(config))
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


def _check_cue_references(config: ProjectConfig) -> None:
    nsi_indices = {cue.index for cue in config.original_track.nsi_cues()}
    for label, mapping in (("anchor_preview_texts", config.anchor_preview_texts),
                           ("cue_estimates", config.cue_estimates)):
        for index in mapping:
            if index not in nsi_indices:
                raise ValidationFailed(
                    f"{label}.{index}",
                    "entry does not refer to an existing NSI cue")


def load_config(data: bytes | str | dict) -> ProjectConfig:
    """Parse and validate a config; errors carry the failing JSON path."""
    if isinstance(data, (bytes, str)):
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        try:
            payload = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ValidationFailed(
                "$", f"invalid JSON at line {exc.lineno} column {exc.colno}: "
                     f"{exc.msg}") from exc
    else:
        payload = data

    if not isinstance(payload, dict):
        raise ValidationFailed("$", "config must be a JSON object")
    version = payload.get("schema_version")
    if version not in KNOWN_SCHEMA_VERSIONS:
        raise SchemaMismatch(
            f"unknown schema_version {version!r}; supported: "
            f"{sorted(KNOWN_SCHEMA_VERSIONS)}", version=version)

    error = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(payload))
    if error is not None:
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}"
            for p in error.absolute_path)
        raise ValidationFailed(path, error.message)

    cues = []
    for i, raw in enumerate(payload["original_track"]["cues"]):
        cue = CaptionCue(
            index=raw["index"],
            start_ms=raw["start_ms"],
            end_ms=raw["end_ms"],
            text=raw["text"],
            kind=CueKind(raw["kind"]),
            category=NsiCategory(raw["category"]) if raw.get("category") else None,
            locked=raw["locked"],
        )
        path = f"$.original_track.cues[{i}]"
        if cue.start_ms >= cue.end_ms:
            raise ValidationFailed(path, "cue must end after it starts")
        kind, category = detect_nsi(cue.text)
        if kind is not cue.kind:
            raise ValidationFailed(
                f"{path}.kind",
                f"stored kind {cue.kind.value!r} contradicts the cue text")
        if cues:
            if cue.index <= cues[-1].index:
                raise ValidationFailed(f"{path}.index", "cue indices must increase")
            if cue.start_ms < cues[-1].start_ms:
                raise ValidationFailed(f"{path}.start_ms", "cues must be sorted by start")
        cues.append(cue)
    track = CaptionTrack(cues=cues,
                         source_name=payload["original_track"]["source_name"])

    raw_space = payload["space"]
    try:
        space = TransformSpace(
            baseline=ParamPoint(**raw_space["baseline"]),
            lower_anchor=ParamPoint(**raw_space["lower_anchor"]),
            upper_anchor=ParamPoint(**raw_space["upper_anchor"]),
            calib_detail=DimensionCalibration(**raw_space["calibration"]["detail"]),
            calib_expr=DimensionCalibration(**raw_space["calibration"]["expressiveness"]),
        )
    except (InvalidAnchorOrder, ValueError) as exc:
        message = getattr(exc, "message", str(exc))
        raise ValidationFailed("$.space.anchors", message) from exc

    try:
        previews = {
            int(index): AnchorPreview(lower_text=raw.get("lower_text"),
                                      upper_text=raw.get("upper_text"))
            for index, raw in payload["anchor_preview_texts"].items()
        }
        descriptions = {int(k): v for k, v in payload["context_descriptions"].items()}
        estimates = {
            int(k): Estimate(detail=v["detail"], expressiveness=v["expressiveness"])
            for k, v in payload["cue_estimates"].items()
        }
    except ValueError as exc:
        raise ValidationFailed("$", str(exc)) from exc

    meta = payload["metadata"]
    config = ProjectConfig(
        original_track=track,
        space=space,
        metadata=VideoMetadata(title=meta["title"], genre=meta["genre"],
                               synopsis=meta["synopsis"]),
        anchor_preview_texts=previews,
        context_descriptions=descriptions,
        cue_estimates=estimates,
        schema_version=version,
        prompt_version=payload["prompt_version"],
    )
    _check_cue_references(config)
    return config
