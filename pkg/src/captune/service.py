"""HTTP service for the creator and viewer workflows.

Creator side: upload a caption file, calibrate baselines, set anchors,
preview transformations cue by cue (with expressiveness recalibration),
edit/lock cues, and export the project configuration. Viewer side: open a
session on a config, pick grid cells or chat preferences, and fetch
transformed captions for playback windows. Transformed texts are cached
per (cue, preferences) so identical sounds stay identically captioned.

State lives in process; passing a data directory turns on an append-only
JSON-lines store that is replayed on startup.
"""

from __future__ import annotations

import hashlib
import json
import logging
import statistics
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .backends import Estimate, GenerativeBackend
from .captions import CaptionCue, CaptionTrack, detect_nsi, parse_srt
from .config import (
    AnchorPreview,
    ProjectConfig,
    build_config,
    config_to_dict,
    export_config,
    load_config,
)
from .context import DescriptionCache, SidecarDescriber, compute_window
from .errors import (
    CapTuneError,
    DisabledCell,
    InvalidAnchorOrder,
    LockedCue,
    NoNsiCues,
    NotCalibrated,
    NotFound,
    NotNsi,
    ValidationFailed,
)
from .prompting import (
    PROMPT_VERSION,
    REPRESENTATION_LABELS,
    SoundRepresentation,
    VideoMetadata,
    ViewerPrefs,
    build_request,
    render_prompt,
)
from .space import (
    DimensionCalibration,
    ParamPoint,
    TransformSpace,
    clamp_to_anchors,
    map_slider,
    recalibrate,
)

logger = logging.getLogger(__name__)

_HTTP_STATUS = {
    "NotFound": 404,
    "BackendUnavailable": 503,
    "MalformedResponse": 502,
    "DescriberUnavailable": 503,
}

# Bounds the creator explores while previewing: the full semantic scale,
# independent of whatever anchors end up being chosen.
_FULL_SCALE_LOWER = ParamPoint(1.0, 1.0)
_FULL_SCALE_UPPER = ParamPoint(10.0, 10.0)


@dataclass
class ProjectState:
    id: str
    track: CaptionTrack
    metadata: VideoMetadata
    duration_ms: int | None = None
    baseline: ParamPoint | None = None
    calib_detail: DimensionCalibration | None = None
    calib_expr: DimensionCalibration | None = None
    lower_anchor: ParamPoint | None = None
    upper_anchor: ParamPoint | None = None
    cue_estimates: dict[int, Estimate] = field(default_factory=dict)
    descriptions: DescriptionCache = field(default_factory=DescriptionCache)
    anchor_previews: dict[int, AnchorPreview] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


@dataclass
class SessionState:
    id: str
    config: ProjectConfig
    prefs: ViewerPrefs
    cache: dict[tuple[int, str], str] = field(default_factory=dict)
    hits: int = 0
    misses: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class _Body(BaseModel):
    model_config = {"extra": "forbid"}


class PointBody(_Body):
    detail: float
    expressiveness: float


class MetadataBody(_Body):
    title: str = ""
    genre: str = ""
    synopsis: str = ""


class CreateProjectBody(_Body):
    srt: str
    metadata: MetadataBody = MetadataBody()
    descriptions: dict[str, str] | None = None
    duration_ms: int | None = None
    lenient: bool = False
    source_name: str = "upload.srt"


class AnchorsBody(_Body):
    lower: PointBody
    upper: PointBody


class PreviewBody(_Body):
    cue_index: int
    slider_detail: float = 0.0
    slider_expr: float = 0.0


class AnchorPreviewBody(_Body):
    lower_text: str | None = None
    upper_text: str | None = None


class CueUpdateBody(_Body):
    new_text: str | None = None
    lock: bool | None = None
    anchor_preview: AnchorPreviewBody | None = None


class CellBody(_Body):
    detail: int
    expressiveness: int


class PrefsBody(_Body):
    cell: CellBody | None = None
    target: PointBody | None = None
    representation: SoundRepresentation | None = None
    genre_aligned: bool | None = None


class ChatBody(_Body):
    utterance: str


class CreateSessionBody(_Body):
    config: dict


def prefs_hash(prefs: ViewerPrefs, prompt_version: str = PROMPT_VERSION) -> str:
    """Digest of everything that can change a transformed text."""
    canonical = json.dumps({
        "detail": prefs.target.detail,
        "expressiveness": prefs.target.expressiveness,
        "representation": prefs.representation.value,
        "genre_aligned": prefs.genre_aligned,
        "prompt_version": prompt_version,
    }, sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _prefs_dict(prefs: ViewerPrefs) -> dict:
    return {
        "target": {"detail": prefs.target.detail,
                   "expressiveness": prefs.target.expressiveness},
        "representation": prefs.representation.value,
        "genre_aligned": prefs.genre_aligned,
    }


def _cue_dict(cue: CaptionCue, text: str | None = None) -> dict:
    return {
        "index": cue.index,
        "start_ms": cue.start_ms,
        "end_ms": cue.end_ms,
        "text": text if text is not None else cue.text,
        "kind": cue.kind.value,
        "category": cue.category.value if cue.category else None,
        "locked": cue.locked,
        "transformed": text is not None and text != cue.text,
    }


class PersistentLog:
    """Append-only project/session snapshot store under a data directory."""

    def __init__(self, data_dir: Path):
        data_dir.mkdir(parents=True, exist_ok=True)
        self._path = data_dir / "store.jsonl"
        self._lock = threading.Lock()

    def append(self, kind: str, record: dict) -> None:
        line = json.dumps({"kind": kind, **record}, sort_keys=True,
                          ensure_ascii=False)
        with self._lock, self._path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    def replay(self) -> list[dict]:
        if not self._path.exists():
            return []
        records = []
        with self._path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    records.append(json.loads(line))
        return records


class ServiceState:
    def __init__(self, backend: GenerativeBackend, data_dir: Path | None = None):
        self.backend = backend
        self.projects: dict[str, ProjectState] = {}
        self.sessions: dict[str, SessionState] = {}
        self.registry_lock = threading.Lock()
        self.log = PersistentLog(data_dir) if data_dir else None
        if self.log:
            self._restore()

    # -- persistence ----------------------------------------------------------

    def _project_record(self, project: ProjectState) -> dict:
        return {
            "id": project.id,
            "metadata": {"title": project.metadata.title,
                         "genre": project.metadata.genre,
                         "synopsis": project.metadata.synopsis},
            "duration_ms": project.duration_ms,
            "cues": [_cue_dict(c) for c in project.track.cues],
            "source_name": project.track.source_name,
            "baseline": None if project.baseline is None else
                {"detail": project.baseline.detail,
                 "expressiveness": project.baseline.expressiveness},
            "calib_detail": None if project.calib_detail is None else vars(project.calib_detail),
            "calib_expr": None if project.calib_expr is None else vars(project.calib_expr),
            "lower_anchor": None if project.lower_anchor is None else
                {"detail": project.lower_anchor.detail,
                 "expressiveness": project.lower_anchor.expressiveness},
            "upper_anchor": None if project.upper_anchor is None else
                {"detail": project.upper_anchor.detail,
                 "expressiveness": project.upper_anchor.expressiveness},
            "cue_estimates": {str(k): {"detail": v.detail, "expressiveness": v.expressiveness}
                              for k, v in project.cue_estimates.items()},
            "descriptions": {str(k): v for k, v in project.descriptions.as_dict().items()},
            "anchor_previews": {str(k): {"lower_text": v.lower_text,
                                         "upper_text": v.upper_text}
                                for k, v in project.anchor_previews.items()},
        }

    def save_project(self, project: ProjectState) -> None:
        if self.log:
            self.log.append("project", self._project_record(project))

    def save_session(self, session: SessionState) -> None:
        if self.log:
            self.log.append("session", {
                "id": session.id,
                "config": config_to_dict(session.config),
                "prefs": _prefs_dict(session.prefs),
            })

    def _restore(self) -> None:
        latest: dict[tuple[str, str], dict] = {}
        for record in self.log.replay():
            latest[(record["kind"], record["id"])] = record
        for (kind, _), record in latest.items():
            try:
                if kind == "project":
                    self.projects[record["id"]] = self._restore_project(record)
                elif kind == "session":
                    config = load_config(record["config"])
                    prefs_raw = record["prefs"]
                    prefs = ViewerPrefs(
                        target=ParamPoint(**prefs_raw["target"]),
                        representation=SoundRepresentation(prefs_raw["representation"]),
                        genre_aligned=prefs_raw["genre_aligned"],
                    )
                    self.sessions[record["id"]] = SessionState(
                        id=record["id"], config=config, prefs=prefs)
            except (CapTuneError, KeyError, ValueError) as exc:
                logger.warning("skipping unrestorable %s record: %s", kind, exc)
        if self.projects or self.sessions:
            logger.info("restored %d projects and %d sessions",
                        len(self.projects), len(self.sessions))

    @staticmethod
    def _restore_project(record: dict) -> ProjectState:
        cues = []
        for raw in record["cues"]:
            kind, category = detect_nsi(raw["text"])
            cues.append(CaptionCue(
                index=raw["index"], start_ms=raw["start_ms"], end_ms=raw["end_ms"],
                text=raw["text"], kind=kind, category=category,
                locked=raw["locked"]))
        point = lambda d: None if d is None else ParamPoint(**d)
        calib = lambda d: None if d is None else DimensionCalibration(**d)
        return ProjectState(
            id=record["id"],
            track=CaptionTrack(cues=cues, source_name=record["source_name"]),
            metadata=VideoMetadata(**record["metadata"]),
            duration_ms=record["duration_ms"],
            baseline=point(record["baseline"]),
            calib_detail=calib(record["calib_detail"]),
            calib_expr=calib(record["calib_expr"]),
            lower_anchor=point(record["lower_anchor"]),
            upper_anchor=point(record["upper_anchor"]),
            cue_estimates={int(k): Estimate(**v)
                           for k, v in record["cue_estimates"].items()},
            descriptions=DescriptionCache(
                {int(k): v for k, v in record["descriptions"].items()}),
            anchor_previews={int(k): AnchorPreview(**v)
                             for k, v in record["anchor_previews"].items()},
        )

    # -- lookups ---------------------------------------------------------------

    def project(self, project_id: str) -> ProjectState:
        project = self.projects.get(project_id)
        if project is None:
            raise NotFound(f"unknown project {project_id!r}", project_id=project_id)
        return project

    def session(self, session_id: str) -> SessionState:
        session = self.sessions.get(session_id)
        if session is None:
            raise NotFound(f"unknown session {session_id!r}", session_id=session_id)
        return session


def _creator_space(project: ProjectState) -> TransformSpace:
    if project.baseline is None:
        raise NotCalibrated(
            f"project {project.id} has no baseline; run calibrate first",
            project_id=project.id)
    return TransformSpace(
        baseline=project.baseline,
        lower_anchor=_FULL_SCALE_LOWER,
        upper_anchor=_FULL_SCALE_UPPER,
        calib_detail=project.calib_detail,
        calib_expr=project.calib_expr,
    )


def _transform_session_cue(state: ServiceState, session: SessionState,
                           cue: CaptionCue) -> str:
    """Transformed text for one cue under the session prefs, via the cache."""
    if not cue.is_nsi or cue.locked:
        return cue.text
    key = (cue.index, prefs_hash(session.prefs, session.config.prompt_version))
    with session.lock:
        cached = session.cache.get(key)
        if cached is not None:
            session.hits += 1
            return cached
        session.misses += 1
    config = session.config
    preview = config.anchor_preview_texts.get(cue.index)
    # Change ratios are measured from the track-wide baseline so a request
    # equal to the baseline is a no-op for every cue.
    req = build_request(
        cue, config.space, session.prefs, config.metadata,
        scene_context=config.context_descriptions.get(cue.index),
        current=config.space.baseline,
        lower_anchor_text=preview.lower_text if preview else None,
        upper_anchor_text=preview.upper_text if preview else None,
    )
    logger.debug("transform prompt for cue %d:\n%s", cue.index, render_prompt(req))
    text = state.backend.transform(req)
    with session.lock:
        session.cache[key] = text
    return text


def _estimate_point(estimate: Estimate | None) -> ParamPoint | None:
    if estimate is None:
        return None
    return ParamPoint(detail=estimate.detail, expressiveness=estimate.expressiveness)


def create_app(backend: GenerativeBackend, *, data_dir: Path | str | None = None,
               cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    state = ServiceState(backend, Path(data_dir) if data_dir else None)
    app = FastAPI(title="captune")
    app.state.service = state
    app.add_middleware(
        CORSMiddleware, allow_origins=list(cors_origins),
        allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(CapTuneError)
    async def captune_error_handler(_request: Request, exc: CapTuneError):
        status = _HTTP_STATUS.get(exc.code, 422)
        return JSONResponse(status_code=status, content=exc.to_payload())

    @app.exception_handler(RequestValidationError)
    async def request_error_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "code": "InvalidRequest", "message": "request body failed validation",
            "details": {"errors": exc.errors()}})

    # -- creator endpoints ----------------------------------------------------

    @app.post("/projects", status_code=201)
    def create_project(body: CreateProjectBody):
        track = parse_srt(body.srt, lenient=body.lenient,
                          source_name=body.source_name)
        descriptions = {int(k): v for k, v in (body.descriptions or {}).items()}
        project = ProjectState(
            id=uuid.uuid4().hex,
            track=track,
            metadata=VideoMetadata(**body.metadata.model_dump()),
            duration_ms=body.duration_ms,
            descriptions=DescriptionCache(descriptions),
        )
        with state.registry_lock:
            state.projects[project.id] = project
        state.save_project(project)
        return {"project_id": project.id, "cue_count": len(track.cues),
                "nsi_count": len(track.nsi_cues())}

    @app.post("/projects/{project_id}/calibrate")
    def calibrate(project_id: str):
        project = state.project(project_id)
        nsi = project.track.nsi_cues()
        if not nsi:
            raise NoNsiCues("project has no non-speech cues to calibrate on",
                            project_id=project_id)
        with project.lock:
            estimates = {}
            for cue in nsi:
                context = project.descriptions.get(cue.index)
                estimates[cue.index] = state.backend.estimate(cue.text, context)
            baseline = ParamPoint(
                detail=float(statistics.median(e.detail for e in estimates.values())),
                expressiveness=float(statistics.median(
                    e.expressiveness for e in estimates.values())),
            )
            project.cue_estimates = estimates
            project.baseline = baseline
            project.calib_detail = DimensionCalibration(v_ref=baseline.detail)
            project.calib_expr = DimensionCalibration(v_ref=baseline.expressiveness)
        state.save_project(project)
        return {"detail": baseline.detail, "expressiveness": baseline.expressiveness,
                "cue_estimates": {str(k): {"detail": v.detail,
                                           "expressiveness": v.expressiveness}
                                  for k, v in estimates.items()}}

    @app.post("/projects/{project_id}/anchors")
    def set_anchors(project_id: str, body: AnchorsBody):
        project = state.project(project_id)
        if project.baseline is None:
            raise NotCalibrated("calibrate the project before setting anchors",
                                project_id=project_id)
        try:
            lower = ParamPoint(**body.lower.model_dump())
            upper = ParamPoint(**body.upper.model_dump())
        except ValueError as exc:
            raise InvalidAnchorOrder(str(exc)) from exc
        with project.lock:
            # Raises InvalidAnchorOrder unless lower < upper componentwise
            # and the baseline sits inside.
            TransformSpace(
                baseline=project.baseline, lower_anchor=lower, upper_anchor=upper,
                calib_detail=project.calib_detail, calib_expr=project.calib_expr)
            project.lower_anchor = lower
            project.upper_anchor = upper
        state.save_project(project)
        return {"lower": {"detail": lower.detail, "expressiveness": lower.expressiveness},
                "upper": {"detail": upper.detail, "expressiveness": upper.expressiveness}}

    @app.post("/projects/{project_id}/preview")
    def preview(project_id: str, body: PreviewBody):
        project = state.project(project_id)
        cue = project.track.get(body.cue_index)
        if cue is None:
            raise NotFound(f"no cue with index {body.cue_index}",
                           cue_index=body.cue_index)
        if not cue.is_nsi:
            raise NotNsi(f"cue {cue.index} is not a non-speech cue", index=cue.index)
        if cue.locked:
            raise LockedCue(f"cue {cue.index} is locked", index=cue.index)

        if body.slider_detail == 0 and body.slider_expr == 0:
            # Reference position: the original caption, no backend involved.
            space = _creator_space(project)
            return {"text": cue.text,
                    "values": {"detail": map_slider(space.calib_detail, 0.0),
                               "expressiveness": map_slider(space.calib_expr, 0.0)},
                    "recalibrated_expressiveness": None}

        with project.lock:
            space = _creator_space(project)
            target = ParamPoint(
                detail=map_slider(space.calib_detail, body.slider_detail),
                expressiveness=map_slider(space.calib_expr, body.slider_expr),
            )
            current = _estimate_point(project.cue_estimates.get(cue.index)) \
                or project.baseline
            prefs = ViewerPrefs(target=target)
            describer = SidecarDescriber(project.descriptions.as_dict())
            window = compute_window(cue, project.duration_ms)
            context = project.descriptions.get_or_describe(window, describer)
            preview_entry = project.anchor_previews.get(cue.index)
            req = build_request(
                cue, space, prefs, project.metadata, scene_context=context,
                current=current,
                lower_anchor_text=preview_entry.lower_text if preview_entry else None,
                upper_anchor_text=preview_entry.upper_text if preview_entry else None)
            logger.debug("preview prompt for cue %d:\n%s", cue.index, render_prompt(req))
            text = state.backend.transform(req)

            recalibrated = None
            moved_detail = body.slider_detail != space.calib_detail.s_ref
            slider_inside = (space.calib_expr.s_min < body.slider_expr
                             < space.calib_expr.s_max)
            if moved_detail and slider_inside:
                # Detail changes bleed into perceived expressiveness:
                # re-rate the transformed caption and pin the new value to
                # the slider position the creator is looking at.
                reestimated = state.backend.estimate(text, context)
                project.calib_expr = recalibrate(
                    project.calib_expr, body.slider_expr, reestimated.expressiveness)
                recalibrated = reestimated.expressiveness
        state.save_project(project)
        return {"text": text,
                "values": {"detail": target.detail,
                           "expressiveness": target.expressiveness},
                "recalibrated_expressiveness": recalibrated}

    @app.put("/projects/{project_id}/cues/{cue_index}")
    def update_cue(project_id: str, cue_index: int, body: CueUpdateBody):
        project = state.project(project_id)
        cue = project.track.get(cue_index)
        if cue is None:
            raise NotFound(f"no cue with index {cue_index}", cue_index=cue_index)
        if not cue.is_nsi:
            raise NotNsi(f"cue {cue_index} is not a non-speech cue", index=cue_index)
        with project.lock:
            if body.new_text is not None:
                if not body.new_text.strip():
                    raise ValidationFailed("new_text", "must be non-empty")
                cue.text = body.new_text
                cue.kind, cue.category = detect_nsi(body.new_text)
                # The recorded estimate rated the old text; an edit that
                # drops the NSI wrapper also orphans any anchor previews.
                project.cue_estimates.pop(cue_index, None)
                if not cue.is_nsi:
                    project.anchor_previews.pop(cue_index, None)
            if body.lock is not None:
                cue.locked = body.lock
            if body.anchor_preview is not None:
                existing = project.anchor_previews.get(cue_index, AnchorPreview())
                project.anchor_previews[cue_index] = AnchorPreview(
                    lower_text=body.anchor_preview.lower_text
                        if body.anchor_preview.lower_text is not None
                        else existing.lower_text,
                    upper_text=body.anchor_preview.upper_text
                        if body.anchor_preview.upper_text is not None
                        else existing.upper_text,
                )
        state.save_project(project)
        return _cue_dict(cue)

    @app.get("/projects/{project_id}/export")
    def export(project_id: str):
        project = state.project(project_id)
        with project.lock:
            config = build_config(
                track=project.track,
                metadata=project.metadata,
                baseline=project.baseline,
                lower_anchor=project.lower_anchor,
                upper_anchor=project.upper_anchor,
                calib_detail=project.calib_detail,
                calib_expr=project.calib_expr,
                anchor_previews=project.anchor_previews,
                context_descriptions=project.descriptions.as_dict(),
                cue_estimates=project.cue_estimates,
            )
            payload = export_config(config)
        return Response(content=payload, media_type="application/json")

    # -- viewer endpoints -------------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        config = load_config(body.config)
        prefs = ViewerPrefs(target=config.space.baseline)
        session = SessionState(id=uuid.uuid4().hex, config=config, prefs=prefs)
        with state.registry_lock:
            state.sessions[session.id] = session
        state.save_session(session)
        return {"session_id": session.id, "prefs": _prefs_dict(prefs)}

    @app.put("/sessions/{session_id}/prefs")
    def set_prefs(session_id: str, body: PrefsBody):
        session = state.session(session_id)
        space = session.config.space
        with session.lock:
            prefs = session.prefs
            target = prefs.target
            if body.cell is not None:
                cell_point = ParamPoint(detail=float(body.cell.detail),
                                        expressiveness=float(body.cell.expressiveness))
                if not space.contains(cell_point):
                    raise DisabledCell(
                        f"cell ({body.cell.detail}, {body.cell.expressiveness}) "
                        f"is outside the creator-defined boundaries",
                        cell=[body.cell.detail, body.cell.expressiveness])
                target = cell_point
            elif body.target is not None:
                target = clamp_to_anchors(
                    space, ParamPoint(**body.target.model_dump()))
            session.prefs = ViewerPrefs(
                target=target,
                representation=body.representation or prefs.representation,
                genre_aligned=prefs.genre_aligned if body.genre_aligned is None
                    else body.genre_aligned,
            )
        state.save_session(session)
        return {"prefs": _prefs_dict(session.prefs)}

    @app.post("/sessions/{session_id}/chat")
    def chat(session_id: str, body: ChatBody):
        session = state.session(session_id)
        space = session.config.space
        intent = state.backend.interpret_preference(body.utterance, session.prefs)
        if not intent.recognized:
            return {"intent": _intent_dict(intent),
                    "prefs": _prefs_dict(session.prefs),
                    "reply": intent.explanation}
        with session.lock:
            old = session.prefs
            raw_detail = old.target.detail + (intent.detail_delta or 0.0)
            raw_expr = old.target.expressiveness + (intent.expressiveness_delta or 0.0)
            clamped = clamp_to_anchors(space, ParamPoint(
                detail=min(max(raw_detail, 1.0), 10.0),
                expressiveness=min(max(raw_expr, 1.0), 10.0)))
            session.prefs = ViewerPrefs(
                target=clamped,
                representation=intent.representation or old.representation,
                genre_aligned=old.genre_aligned if intent.genre_aligned is None
                    else intent.genre_aligned,
            )
            was_clamped = (clamped.detail != raw_detail
                           or clamped.expressiveness != raw_expr)
            reply = _chat_reply(old, session.prefs, intent, was_clamped)
        state.save_session(session)
        return {"intent": _intent_dict(intent),
                "prefs": _prefs_dict(session.prefs),
                "reply": reply}

    @app.get("/sessions/{session_id}/captions")
    def get_captions(session_id: str, from_ms: int | None = None,
                     to_ms: int | None = None):
        session = state.session(session_id)
        cues = []
        for cue in session.config.original_track.cues:
            if from_ms is not None and cue.end_ms <= from_ms:
                continue
            if to_ms is not None and cue.start_ms >= to_ms:
                continue
            text = _transform_session_cue(state, session, cue)
            cues.append(_cue_dict(cue, text))
        return {"cues": cues}

    # -- operations ---------------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/metrics")
    def metrics():
        hits = sum(s.hits for s in state.sessions.values())
        misses = sum(s.misses for s in state.sessions.values())
        lookups = hits + misses
        return {
            "projects": len(state.projects),
            "sessions": len(state.sessions),
            "cache": {
                "hits": hits,
                "misses": misses,
                "entries": sum(len(s.cache) for s in state.sessions.values()),
                "hit_rate": hits / lookups if lookups else 0.0,
            },
            "per_session": {
                sid: {"hits": s.hits, "misses": s.misses, "entries": len(s.cache)}
                for sid, s in state.sessions.items()
            },
        }

    return app


def _intent_dict(intent) -> dict:
    return {
        "detail_delta": intent.detail_delta,
        "expressiveness_delta": intent.expressiveness_delta,
        "representation": intent.representation.value if intent.representation else None,
        "genre_aligned": intent.genre_aligned,
        "explanation": intent.explanation,
        "recognized": intent.recognized,
    }


def _chat_reply(old: ViewerPrefs, new: ViewerPrefs, intent, was_clamped: bool) -> str:
    parts = []
    if new.target.detail != old.target.detail:
        direction = "increased" if new.target.detail > old.target.detail else "decreased"
        parts.append(f"{direction} the Level of Detail (now at {new.target.detail:g})")
    if new.target.expressiveness != old.target.expressiveness:
        direction = ("increased" if new.target.expressiveness
                     > old.target.expressiveness else "decreased")
        parts.append(f"{direction} Expressiveness (now at {new.target.expressiveness:g})")
    if new.representation is not old.representation:
        parts.append(f"changed the sound representation mode to "
                     f"{REPRESENTATION_LABELS[new.representation]}")
    if new.genre_aligned != old.genre_aligned:
        parts.append(f"turned genre alignment {'on' if new.genre_aligned else 'off'}")
    if not parts:
        reply = "Your preferences already match that request."
    else:
        joined = parts[0] if len(parts) == 1 else ", ".join(parts[:-1]) + " and " + parts[-1]
        reply = f"I've {joined}."
    if was_clamped:
        reply += " The request was limited to the creator-defined range."
    if parts:
        reply += " Your preferences have been updated."
    return reply
