"""Exception types shared across the captioning pipeline.

Every error carries a stable ``code`` (used verbatim in HTTP and CLI error
payloads) and a ``details`` dict with machine-readable context such as line
numbers or offending values.
"""

from __future__ import annotations

from typing import Any


class CapTuneError(Exception):
    """Base class for all pipeline errors."""

    code = "Internal"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


# --- caption parsing ---

class MalformedTimestamp(CapTuneError):
    code = "MalformedTimestamp"


class MalformedCue(CapTuneError):
    """Structurally broken cue block (bad index line, missing text)."""

    code = "MalformedCue"


class NonMonotonicCue(CapTuneError):
    """Cue ordering violation: indices or start times going backwards,
    or a cue that ends at/before its own start."""

    code = "NonMonotonicCue"


class EmptyFile(CapTuneError):
    code = "EmptyFile"


# --- transformation-space math ---

class SliderOutOfRange(CapTuneError):
    code = "SliderOutOfRange"


class OutOfAnchorBounds(CapTuneError):
    code = "OutOfAnchorBounds"


class DegenerateCalibration(CapTuneError):
    code = "DegenerateCalibration"


class InvalidAnchorOrder(CapTuneError):
    code = "InvalidAnchorOrder"


# --- prompt assembly / cue state ---

class LockedCue(CapTuneError):
    code = "LockedCue"


class NotNsi(CapTuneError):
    code = "NotNsi"


# --- config serialization ---

class AnchorsNotSet(CapTuneError):
    code = "AnchorsNotSet"


class SchemaMismatch(CapTuneError):
    code = "SchemaMismatch"


class ValidationFailed(CapTuneError):
    code = "ValidationFailed"

    def __init__(self, path: str, reason: str, **details: Any):
        super().__init__(f"{path}: {reason}", path=path, reason=reason, **details)
        self.path = path
        self.reason = reason


# --- backends ---

class BackendUnavailable(CapTuneError):
    code = "BackendUnavailable"


class MalformedResponse(CapTuneError):
    code = "MalformedResponse"


class DescriberUnavailable(CapTuneError):
    code = "DescriberUnavailable"


# --- service ---

class NotFound(CapTuneError):
    code = "NotFound"


class NotCalibrated(CapTuneError):
    code = "NotCalibrated"


class NoNsiCues(CapTuneError):
    code = "NoNsiCues"


class DisabledCell(CapTuneError):
    code = "DisabledCell"
