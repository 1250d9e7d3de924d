"""Creator-bounded, viewer-adaptive transformation of non-speech captions."""

from .backends import (
    BackendKind,
    ChatCompletionBackend,
    Estimate,
    FixtureTransport,
    GenerativeBackend,
    MockBackend,
    PreferenceIntent,
    fixture_backend,
)
from .captions import (
    CaptionCue,
    CaptionTrack,
    CueKind,
    NsiCategory,
    detect_nsi,
    parse_srt,
    serialize_srt,
)
from .config import (
    SCHEMA_VERSION,
    AnchorPreview,
    ProjectConfig,
    build_config,
    export_config,
    load_config,
)
from .context import (
    CONTEXT_PAD_MS,
    ContextWindow,
    DescriberBackend,
    DescriptionCache,
    SidecarDescriber,
    compute_window,
    describe_window,
)
from .errors import CapTuneError
from .prompting import (
    PROMPT_VERSION,
    SoundRepresentation,
    TransformRequest,
    VideoMetadata,
    ViewerPrefs,
    build_request,
    quantify,
    render_prompt,
)
from .service import create_app
from .space import (
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

__version__ = "0.1.0"

__all__ = [
    "AnchorPreview", "BackendKind", "CONTEXT_PAD_MS", "CapTuneError",
    "CaptionCue", "CaptionTrack", "ChatCompletionBackend", "ContextWindow",
    "CueKind", "DescriberBackend", "DescriptionCache", "DimensionCalibration",
    "Estimate", "FixtureTransport", "GenerativeBackend", "MockBackend",
    "NsiCategory", "PROMPT_VERSION", "ParamPoint", "PreferenceIntent",
    "ProjectConfig", "RatioPair", "SCHEMA_VERSION", "SidecarDescriber",
    "SoundRepresentation", "TransformRequest", "TransformSpace",
    "VideoMetadata", "ViewerPrefs", "build_config", "build_request",
    "change_ratio", "clamp_to_anchors", "compute_window", "create_app",
    "describe_window", "detect_nsi", "export_config", "fixture_backend",
    "interpolation_ratio", "load_config", "map_slider", "parse_srt",
    "quantify", "recalibrate", "render_prompt", "serialize_srt",
]
