"""Generative backends for transformation, estimation, and chat interpretation.

Two interchangeable implementations of the same interface:

* MockBackend - a deterministic rule table. Level of detail drives a
  content-word budget, expressiveness drives a styling-word budget, and
  small per-sound lexicons supply onomatopoeia, sensory descriptors, and
  padding vocabulary. Identical inputs produce identical outputs on every
  platform, which makes the whole pipeline testable offline.
* ChatCompletionBackend - an OpenAI-compatible chat-completions client
  (temperature 0, bounded retries, response cache). With a replay
  transport it serves recorded request/response pairs from fixture files
  for hermetic integration tests.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import re
import threading
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import httpx

from .errors import BackendUnavailable, MalformedResponse
from .prompting import (
    PROMPT_VERSION,
    REPRESENTATION_LABELS,
    SoundRepresentation,
    TransformRequest,
    ViewerPrefs,
    render_prompt,
)

logger = logging.getLogger(__name__)


class BackendKind(str, Enum):
    LIVE_CHAT_COMPLETION = "live_chat_completion"
    DETERMINISTIC_MOCK = "deterministic_mock"


@dataclass(frozen=True)
class Estimate:
    """Per-dimension rating of a caption on the semantic 1-10 scale."""

    detail: float
    expressiveness: float

    def __post_init__(self):
        for name, v in (("detail", self.detail),
                        ("expressiveness", self.expressiveness)):
            if not 1.0 <= v <= 10.0:
                raise ValueError(f"{name} estimate out of [1,10]: {v}")


@dataclass(frozen=True)
class PreferenceIntent:
    """Parsed outcome of a natural-language preference utterance."""

    detail_delta: float | None = None
    expressiveness_delta: float | None = None
    representation: SoundRepresentation | None = None
    genre_aligned: bool | None = None
    explanation: str = ""

    @property
    def recognized(self) -> bool:
        return any(v is not None for v in (
            self.detail_delta, self.expressiveness_delta,
            self.representation, self.genre_aligned))


class GenerativeBackend(ABC):
    """The three capabilities every backend must provide."""

    @abstractmethod
    def transform(self, req: TransformRequest) -> str:
        """Return the transformed NSI text, keeping the original wrapper."""

    @abstractmethod
    def estimate(self, caption_text: str, scene_context: str | None = None) -> Estimate:
        """Rate a caption's detail and expressiveness on the 1-10 scale."""

    @abstractmethod
    def interpret_preference(self, utterance: str, current: ViewerPrefs) -> PreferenceIntent:
        """Map conversational input to preference changes."""


# ---------------------------------------------------------------------------
# Deterministic mock: rule tables
# ---------------------------------------------------------------------------

# Function words (plus the generic filler "sound") that never count toward
# the content-word budget.
STOPWORDS = frozenset({
    "a", "an", "the", "of", "with", "within", "from", "on", "in", "at",
    "to", "into", "by", "as", "and", "or", "but", "is", "are", "was",
    "were", "be", "being", "been", "it", "its", "this", "that", "there",
    "through", "over", "under", "sound", "sounds",
})

# Expressive styling vocabulary: these words count toward the
# expressiveness estimate and are what the modifier budget adds/removes.
# They never count as content.
MODIFIER_WORDS = frozenset({
    "loud", "loudly", "soft", "softly", "quiet", "quietly", "weak",
    "weakly", "faint", "faintly", "gentle", "gently", "cautious",
    "cautiously", "weary", "wearily", "sorrow", "sorrowful", "sorrowfully",
    "mournful", "mournfully", "plaintively", "insistently", "deep", "low",
    "high-pitched", "thin", "shrill", "shrilly", "sharp", "sharply",
    "piercingly", "heavy", "heavily", "warm", "warmly", "contentedly",
    "tense", "tensely", "eerie", "eerily", "haunting", "hauntingly",
    "ominous", "ominously", "menacing", "menacingly", "scary", "dramatic",
    "dramatically", "violent", "violently", "intense", "intensely",
    "relentless", "relentlessly", "persistent", "persistently", "steady",
    "steadily", "frantic", "frantically", "crashing", "suddenly", "cold",
    "coldly", "icy", "fierce", "fiercely", "wild", "wildly", "bright",
    "brightly", "playfully", "tenderly", "soaringly", "dry", "hollow",
    "dull", "rough", "wet", "harsh", "whimsical", "playful",
    "foreboding", "vivid", "mystical", "otherworldly", "tender", "bold",
    "stylized", "somber", "grand", "lively", "resonant", "distant",
})

# Words of each sound family map to one key; the key selects the
# onomatopoeia, sensory, padding, and modifier lexicon entries.
_SOUND_KEY_ALIASES = {
    "thunder": "thunder", "thunderclap": "thunder",
    "door": "door", "doors": "door",
    "whistle": "whistle", "whistles": "whistle", "whistling": "whistle",
    "meow": "meow", "meows": "meow", "meowing": "meow",
    "purr": "purr", "purrs": "purr", "purring": "purr",
    "rain": "rain", "raining": "rain", "pattering": "rain", "drizzle": "rain",
    "wind": "wind", "gust": "wind", "gusts": "wind", "breeze": "wind",
    "music": "music", "song": "music", "melody": "music", "piano": "music",
    "violin": "music", "orchestra": "music",
    "knock": "knock", "knocks": "knock", "knocking": "knock",
    "footsteps": "footsteps", "steps": "footsteps",
    "engine": "engine", "motor": "engine",
    "splash": "splash", "splashes": "splash", "splashing": "splash",
    "bark": "bark", "barks": "bark", "barking": "bark",
    "crash": "crash", "crashes": "crash",
    "bang": "bang", "bangs": "bang",
    "rumble": "rumble", "rumbles": "rumble", "rumbling": "rumble",
}

# Content-word budget per interpolation-ratio decile of level of detail.
WORD_BUDGET = (1, 2, 3, 3, 5, 6, 7, 8, 10, 12)
# Styling-word budget per interpolation-ratio decile of expressiveness.
MODIFIER_BUDGET = (0, 1, 1, 2, 2, 3, 3, 4, 4, 5)

MODIFIER_SEQUENCES = {
    "thunder": ("crashing", "intensely", "violently", "ominously", "relentlessly"),
    "music": ("softly", "gently", "hauntingly", "tenderly", "soaringly"),
    "rain": ("steadily", "softly", "relentlessly", "heavily", "coldly"),
    "wind": ("fiercely", "coldly", "relentlessly", "eerily", "wildly"),
    "door": ("sharply", "heavily", "suddenly", "violently", "loudly"),
    "meow": ("weakly", "plaintively", "sorrowfully", "insistently", "faintly"),
    "purr": ("softly", "warmly", "contentedly", "steadily", "gently"),
    "whistle": ("shrilly", "brightly", "piercingly", "playfully", "sharply"),
}
GENERIC_MODIFIERS = ("intensely", "sharply", "softly", "eerily", "steadily")

DETAIL_SEQUENCES = {
    "thunder": ("claps", "overhead", "storm", "night", "clouds", "horizon",
                "distance", "rooftops", "rolls", "echoes", "sky", "winds"),
    "music": ("piano", "strings", "chords", "tempo", "harmony", "refrain",
              "notes", "crescendo", "melody", "phrases", "rhythm", "verse"),
    "rain": ("drops", "rooftops", "windows", "gutters", "pavement", "puddles",
             "bursts", "sheets", "downpour", "patter", "streets", "eaves"),
    "wind": ("gusts", "branches", "leaves", "alleys", "windows", "whirls",
             "drafts", "currents", "swirls", "treetops", "plains", "dunes"),
    "door": ("hinges", "frame", "latch", "hallway", "draft", "handle",
             "wood", "threshold", "slam", "footsteps", "echo", "corridor"),
    "meow": ("alley", "cat", "street", "shadows", "corner", "fence",
             "dusk", "pavement", "call", "reply", "stray", "yowl"),
    "purr": ("cat", "chest", "lap", "blanket", "rhythm", "hum",
             "breaths", "fur", "warmth", "pulse", "murmur", "drone"),
    "whistle": ("dolphin", "water", "surface", "waves", "pod", "calls",
                "clicks", "sea", "spray", "arc", "leap", "splash"),
}
GENERIC_DETAIL_WORDS = ("nearby", "offscreen", "background", "bursts",
                        "pauses", "returns", "repeats", "fades", "swells",
                        "lingers", "rises", "falls")

ONOMATOPOEIA_TABLE = {
    "thunder": "BOOM!", "door": "CREAK!", "knock": "KNOCK-KNOCK!",
    "rain": "PITTER-PATTER!", "wind": "WHOOSH!", "whistle": "TWEEE!",
    "meow": "MEOW!", "purr": "PRRRR!", "bang": "BANG!", "crash": "CRASH!",
    "footsteps": "THUMP-THUMP!", "bark": "WOOF!", "splash": "SPLOOSH!",
    "engine": "VROOM!", "rumble": "RMMMBLE!",
}

# descriptor (styling) + gerund (content) per sound family.
SENSORY_TABLE = {
    "whistle": ("high-pitched", "whistling"),
    "thunder": ("deep", "rumbling"),
    "rumble": ("deep", "rumbling"),
    "purr": ("low", "thrumming"),
    "meow": ("thin", "mewling"),
    "music": ("soft", "swelling"),
    "rain": ("steady", "drumming"),
    "wind": ("cold", "howling"),
    "door": ("dry", "creaking"),
    "knock": ("hollow", "rapping"),
    "footsteps": ("dull", "thudding"),
    "engine": ("rough", "droning"),
    "bark": ("sharp", "yapping"),
    "splash": ("wet", "sloshing"),
    "crash": ("harsh", "clattering"),
    "bang": ("sharp", "popping"),
}

SOURCE_NOUNS = frozenset({
    "door", "thunder", "wind", "rain", "dolphin", "cat", "dog", "bird",
    "piano", "engine", "footsteps", "waves", "owl", "wolf", "storm",
    "phone", "clock", "train", "car", "alley",
})

GENRE_ADJECTIVES = {
    "animation": "whimsical", "animated": "whimsical", "comedy": "playful",
    "horror": "ominous", "thriller": "foreboding", "drama": "tense",
    "documentary": "vivid", "fantasy": "mystical", "sci-fi": "otherworldly",
    "science fiction": "otherworldly", "romance": "tender",
    "adventure": "bold",
}
DEFAULT_GENRE_ADJECTIVE = "stylized"

_WRAPPERS = {"[": "]", "(": ")"}
_STRIP_CHARS = ".,!?;:'\"[]()"


def split_wrapper(text: str) -> tuple[str, str, str]:
    """Split off the enclosing bracket pair, if any."""
    stripped = text.strip()
    if len(stripped) >= 2 and stripped[0] in _WRAPPERS \
            and stripped[-1] == _WRAPPERS[stripped[0]]:
        return stripped[0], stripped[1:-1].strip(), stripped[-1]
    return "", stripped, ""


def _norm(token: str) -> str:
    return token.strip(_STRIP_CHARS).lower()


def _classify(token: str) -> str:
    norm = _norm(token)
    if not norm or norm in STOPWORDS:
        return "stop"
    if norm in MODIFIER_WORDS:
        return "modifier"
    return "content"


def content_word_count(text: str) -> int:
    """Number of content words (not function words, not styling words)."""
    _, inner, _ = split_wrapper(text)
    return sum(1 for w in inner.split() if _classify(w) == "content")


def modifier_hits(text: str) -> int:
    _, inner, _ = split_wrapper(text)
    return sum(1 for w in inner.split() if _classify(w) == "modifier")


def _ratio_decile(r: float) -> int:
    if r <= 0.1:
        return 1
    if r >= 0.9:
        return 10
    return math.ceil(r * 10)


def budget_for_ratio(r: float) -> int:
    return WORD_BUDGET[_ratio_decile(r) - 1]


def modifier_budget_for_ratio(r: float) -> int:
    return MODIFIER_BUDGET[_ratio_decile(r) - 1]


def _find_sound_key(words: list[str]) -> str | None:
    for w in words:
        key = _SOUND_KEY_ALIASES.get(_norm(w))
        if key:
            return key
    return None


class MockBackend(GenerativeBackend):
    """Pure rule-based backend; every output is a function of its inputs."""

    kind = BackendKind.DETERMINISTIC_MOCK

    # -- transformation -----------------------------------------------------

    def transform(self, req: TransformRequest) -> str:
        no_change = (req.detail.delta == 0 and req.expressiveness.delta == 0
                     and req.representation is SoundRepresentation.DEFAULT
                     and not req.genre_aligned)
        if no_change:
            return req.original_text

        opener, inner, closer = split_wrapper(req.original_text)
        words = inner.split()
        key = _find_sound_key(words)

        if req.representation is SoundRepresentation.SENSORY_QUALITY and key in SENSORY_TABLE:
            descriptor, gerund = SENSORY_TABLE[key]
            tokens = [descriptor, gerund]
            tokens = self._fit_content(tokens, budget_for_ratio(req.detail.r), key)
        else:
            if req.detail.delta == 0:
                tokens = list(words)
            else:
                content = [w for w in words if _classify(w) == "content"]
                tokens = self._fit_content(content, budget_for_ratio(req.detail.r), key)
            if req.representation is SoundRepresentation.ONOMATOPOEIA:
                sound_effect = ONOMATOPOEIA_TABLE.get(key or "")
                if sound_effect:
                    tokens = [sound_effect] + tokens
            elif req.representation is SoundRepresentation.SOURCE_FOCUSED:
                tokens = self._lead_with_source(tokens, words)

        if req.expressiveness.delta != 0:
            tokens = self._fit_modifiers(
                tokens, modifier_budget_for_ratio(req.expressiveness.r), key)

        if req.genre_aligned and req.metadata.genre:
            adjective = GENRE_ADJECTIVES.get(
                req.metadata.genre.strip().lower(), DEFAULT_GENRE_ADJECTIVE)
            if adjective not in {_norm(t) for t in tokens}:
                tokens = [adjective] + tokens

        text = " ".join(tokens)
        text = text[:1].upper() + text[1:]
        return f"{opener}{text}{closer}"

    @staticmethod
    def _fit_content(tokens: list[str], budget: int, key: str | None) -> list[str]:
        """Truncate or pad so the token list has exactly `budget` content words."""
        content_positions = [i for i, t in enumerate(tokens) if _classify(t) == "content"]
        if len(content_positions) > budget:
            return tokens[:content_positions[budget - 1] + 1]
        present = {_norm(t) for t in tokens}
        pool = list(DETAIL_SEQUENCES.get(key or "", ())) + list(GENERIC_DETAIL_WORDS)
        out = list(tokens)
        needed = budget - len(content_positions)
        for word in pool:
            if needed == 0:
                break
            if word in present:
                continue
            out.append(word)
            present.add(word)
            needed -= 1
        return out

    @staticmethod
    def _fit_modifiers(tokens: list[str], budget: int, key: str | None) -> list[str]:
        """Drop styling words from the right or append new ones to hit `budget`."""
        current = [i for i, t in enumerate(tokens) if _classify(t) == "modifier"]
        if len(current) > budget:
            drop = set(current[budget:])
            return [t for i, t in enumerate(tokens) if i not in drop]
        present = {_norm(t) for t in tokens}
        pool = list(MODIFIER_SEQUENCES.get(key or "", ())) + list(GENERIC_MODIFIERS)
        out = list(tokens)
        needed = budget - len(current)
        for word in pool:
            if needed == 0:
                break
            if word in present:
                continue
            out.append(word)
            present.add(word)
            needed -= 1
        return out

    @staticmethod
    def _lead_with_source(tokens: list[str], original_words: list[str]) -> list[str]:
        for i, t in enumerate(tokens):
            if _norm(t) in SOURCE_NOUNS:
                if i == 0:
                    return tokens
                return [tokens[i]] + tokens[:i] + tokens[i + 1:]
        for w in original_words:
            if _norm(w) in SOURCE_NOUNS:
                return [w] + tokens
        return tokens

    # -- estimation ---------------------------------------------------------

    def estimate(self, caption_text: str, scene_context: str | None = None) -> Estimate:
        if not caption_text.strip():
            raise ValueError("caption_text must be non-empty")
        detail = min(max(1 + content_word_count(caption_text), 1), 10)
        expressiveness = min(max(1 + 3 * modifier_hits(caption_text), 1), 10)
        return Estimate(detail=float(detail), expressiveness=float(expressiveness))

    # -- preference interpretation -------------------------------------------

    _INTENT_RULES = (
        (re.compile(r"\b(brief|briefer|short|shorter|concise)\b"),
         ("detail", -2.0, "lower level of detail")),
        (re.compile(r"more detail|better sense|more information|more specific"),
         ("detail", +2.0, "raise level of detail")),
        (re.compile(r"more (expressive|dramatic|evocative|cinematic)"),
         ("expressiveness", +2.0, "raise expressiveness")),
        (re.compile(r"less (expressive|dramatic)|more neutral|plainer|tone (it|that) down"),
         ("expressiveness", -2.0, "lower expressiveness")),
        (re.compile(r"what\b.*\b(is|'s)\s+making\b"),
         ("representation", SoundRepresentation.SOURCE_FOCUSED,
          "source-focused representation")),
        (re.compile(r"what\b.*\bsounds?\s+like\b"),
         ("representation", SoundRepresentation.SENSORY_QUALITY,
          "sensory quality-focused representation")),
        (re.compile(r"\bonomatopoeia\b|comic[- ]book"),
         ("representation", SoundRepresentation.ONOMATOPOEIA,
          "onomatopoeic representation")),
        (re.compile(r"match (the )?(movie|film|genre|video)|fit the genre"),
         ("genre", True, "genre alignment on")),
        (re.compile(r"(ignore|drop|disable) (the )?genre"),
         ("genre", False, "genre alignment off")),
    )

    def interpret_preference(self, utterance: str, current: ViewerPrefs) -> PreferenceIntent:
        text = utterance.lower()
        detail_delta: float | None = None
        expr_delta: float | None = None
        representation: SoundRepresentation | None = None
        genre: bool | None = None
        notes: list[str] = []
        for pattern, (kind, value, note) in self._INTENT_RULES:
            if not pattern.search(text):
                continue
            if kind == "detail":
                detail_delta = (detail_delta or 0.0) + value
            elif kind == "expressiveness":
                expr_delta = (expr_delta or 0.0) + value
            elif kind == "representation":
                representation = value
            elif kind == "genre":
                genre = value
            notes.append(note)
        if not notes:
            return PreferenceIntent(
                explanation="I could not map that to a caption preference; try "
                            "asking for more or less detail, expressiveness, a "
                            "sound representation, or genre alignment.")
        return PreferenceIntent(
            detail_delta=detail_delta,
            expressiveness_delta=expr_delta,
            representation=representation,
            genre_aligned=genre,
            explanation="; ".join(notes),
        )


# ---------------------------------------------------------------------------
# OpenAI-compatible chat-completions backend
# ---------------------------------------------------------------------------

ENV_API_BASE = "CAPTUNE_API_BASE"
ENV_MODEL = "CAPTUNE_MODEL"
ENV_API_KEY = "CAPTUNE_API_KEY"

TRANSFORM_SYSTEM_PROMPT = (
    "You transform non-speech captions for videos. Follow the quantified "
    "specifications exactly and respond with a single caption line wrapped "
    "in the same bracket style as the current caption. No commentary.")

ESTIMATE_SYSTEM_PROMPT = (
    "Rate a video caption's non-speech text on two scales from 1 to 10: "
    "level of detail (information density) and expressiveness (stylistic, "
    "evocative language).\n"
    "Calibration exemplars:\n"
    '  "[Sound]" -> {"detail": 1, "expressiveness": 1}\n'
    '  "[Steady rain drumming on rooftops]" -> {"detail": 5, "expressiveness": 5}\n'
    '  "[Shrill, persistent meowing echoing through the quiet street]" -> '
    '{"detail": 10, "expressiveness": 10}\n'
    'Respond with one JSON object: {"detail": <number>, "expressiveness": <number>}.')

INTERPRET_SYSTEM_PROMPT = (
    "You turn a viewer's conversational caption request into a preference "
    "change. Respond with one JSON object with any of these keys: "
    '"detail_delta" (number), "expressiveness_delta" (number), '
    '"representation" (one of "default", "source_focused", "onomatopoeia", '
    '"sensory_quality"), "genre_aligned" (boolean), "explanation" (string).')


def build_transform_messages(req: TransformRequest) -> list[dict[str, str]]:
    return [
        {"role": "system", "content": TRANSFORM_SYSTEM_PROMPT},
        {"role": "user", "content": render_prompt(req)},
    ]


def build_estimate_messages(caption_text: str,
                            scene_context: str | None = None) -> list[dict[str, str]]:
    user = f"Caption: {caption_text}"
    if scene_context:
        user += f"\nScene context: {scene_context}"
    return [
        {"role": "system", "content": ESTIMATE_SYSTEM_PROMPT},
        {"role": "user", "content": user},
    ]


def build_interpret_messages(utterance: str, current: ViewerPrefs) -> list[dict[str, str]]:
    user = (
        f"Current preferences: detail={current.target.detail:g}, "
        f"expressiveness={current.target.expressiveness:g}, "
        f"representation={REPRESENTATION_LABELS[current.representation]}, "
        f"genre_aligned={str(current.genre_aligned).lower()}\n"
        f"Viewer message: {utterance}")
    return [
        {"role": "system", "content": INTERPRET_SYSTEM_PROMPT},
        {"role": "user", "content": user},
    ]


def _exchange_key(model: str, messages: list[dict[str, str]]) -> str:
    canonical = json.dumps({"model": model, "messages": messages},
                           sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ChatCompletionBackend(GenerativeBackend):
    """Chat-completions client for OpenAI-compatible endpoints.

    Temperature 0, single completion, two retries with exponential
    backoff, a bounded number of in-flight requests, and a response cache
    keyed by (messages, model, prompt version).
    """

    kind = BackendKind.LIVE_CHAT_COMPLETION

    MAX_RETRIES = 2

    def __init__(self, base_url: str, model: str, api_key: str, *,
                 transport: httpx.BaseTransport | None = None,
                 max_in_flight: int = 4, timeout: float = 30.0,
                 retry_backoff: float = 0.5):
        if not api_key:
            raise BackendUnavailable("no API key configured")
        base = base_url.rstrip("/")
        path = "/chat/completions" if base.endswith("/v1") else "/v1/chat/completions"
        self._url = base + path
        self.model = model
        self._client = httpx.Client(
            transport=transport, timeout=timeout,
            headers={"Authorization": f"Bearer {api_key}"})
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._retry_backoff = retry_backoff
        self._cache: dict[str, str] = {}
        self._cache_lock = threading.Lock()

    @classmethod
    def from_env(cls, *, transport: httpx.BaseTransport | None = None,
                 **kwargs) -> "ChatCompletionBackend":
        api_key = os.environ.get(ENV_API_KEY, "")
        if not api_key:
            raise BackendUnavailable(f"{ENV_API_KEY} is not set")
        base_url = os.environ.get(ENV_API_BASE, "https://api.openai.com/v1")
        model = os.environ.get(ENV_MODEL, "gpt-4o")
        return cls(base_url, model, api_key, transport=transport, **kwargs)

    # -- low-level completion ------------------------------------------------

    def _complete(self, messages: list[dict[str, str]]) -> str:
        cache_key = _exchange_key(self.model, messages) + ":" + PROMPT_VERSION
        with self._cache_lock:
            cached = self._cache.get(cache_key)
        if cached is not None:
            return cached

        payload = {"model": self.model, "messages": messages,
                   "temperature": 0, "n": 1}
        last_error: Exception | None = None
        for attempt in range(self.MAX_RETRIES + 1):
            if attempt and self._retry_backoff:
                time.sleep(self._retry_backoff * 2 ** (attempt - 1))
            try:
                with self._semaphore:
                    response = self._client.post(self._url, json=payload)
            except httpx.HTTPError as exc:
                last_error = exc
                logger.warning("chat completion attempt %d failed: %s", attempt + 1, exc)
                continue
            if response.status_code >= 500:
                last_error = BackendUnavailable(
                    f"server error {response.status_code}",
                    status=response.status_code)
                continue
            if response.status_code != 200:
                raise BackendUnavailable(
                    f"request rejected with status {response.status_code}",
                    status=response.status_code, body=response.text[:500])
            try:
                body = response.json()
                content = body["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError) as exc:
                logger.error("malformed completion payload: %s", response.text[:1000])
                raise MalformedResponse(
                    "completion payload missing choices[0].message.content",
                    raw=response.text[:1000]) from exc
            if not isinstance(content, str):
                raise MalformedResponse("completion content is not a string",
                                        raw=repr(content)[:1000])
            with self._cache_lock:
                self._cache[cache_key] = content
            return content
        raise BackendUnavailable(
            f"chat completion failed after {self.MAX_RETRIES + 1} attempts: "
            f"{last_error}")

    # -- capabilities ---------------------------------------------------------

    def transform(self, req: TransformRequest) -> str:
        content = self._complete(build_transform_messages(req)).strip()
        opener, _, closer = split_wrapper(req.original_text)
        if "\n" in content or not content:
            logger.error("unusable transform response: %r", content)
            raise MalformedResponse("expected a single caption line", raw=content)
        if opener and not (content.startswith(opener) and content.endswith(closer)):
            logger.error("transform response lost the wrapper: %r", content)
            raise MalformedResponse(
                f"expected a caption wrapped in {opener}...{closer}", raw=content)
        return content

    def estimate(self, caption_text: str, scene_context: str | None = None) -> Estimate:
        if not caption_text.strip():
            raise ValueError("caption_text must be non-empty")
        content = self._complete(build_estimate_messages(caption_text, scene_context))
        try:
            data = json.loads(content)
            detail = float(data["detail"])
            expressiveness = float(data["expressiveness"])
        except (ValueError, KeyError, TypeError) as exc:
            logger.error("unusable estimate response: %r", content)
            raise MalformedResponse("expected a JSON object with detail and "
                                    "expressiveness", raw=content[:1000]) from exc
        return Estimate(detail=min(max(detail, 1.0), 10.0),
                        expressiveness=min(max(expressiveness, 1.0), 10.0))

    def interpret_preference(self, utterance: str, current: ViewerPrefs) -> PreferenceIntent:
        content = self._complete(build_interpret_messages(utterance, current))
        try:
            data = json.loads(content)
            if not isinstance(data, dict):
                raise ValueError("not an object")
        except ValueError:
            return PreferenceIntent(explanation="the assistant reply was not interpretable")
        representation = None
        raw_repr = data.get("representation")
        if isinstance(raw_repr, str):
            try:
                representation = SoundRepresentation(raw_repr)
            except ValueError:
                representation = None
        def _num(key):
            value = data.get(key)
            return float(value) if isinstance(value, (int, float)) else None
        genre = data.get("genre_aligned")
        return PreferenceIntent(
            detail_delta=_num("detail_delta"),
            expressiveness_delta=_num("expressiveness_delta"),
            representation=representation,
            genre_aligned=genre if isinstance(genre, bool) else None,
            explanation=str(data.get("explanation", "")),
        )


# ---------------------------------------------------------------------------
# Recorded-fixture replay
# ---------------------------------------------------------------------------

class FixtureTransport(httpx.BaseTransport):
    """Replays stored request/response pairs for hermetic tests.

    Fixture files are JSON objects with an ``exchanges`` list; each entry
    holds the outbound ``request`` ({model, messages}) and the recorded
    ``response`` ({content}). Files without an ``exchanges`` key are
    ignored so unrelated sidecar data can live in the same directory.
    """

    def __init__(self, fixtures_dir: str | Path):
        self._responses: dict[str, str] = {}
        directory = Path(fixtures_dir)
        for path in sorted(directory.glob("*.json")):
            try:
                data = json.loads(path.read_text(encoding="utf-8"))
            except ValueError:
                logger.warning("skipping unreadable fixture file %s", path)
                continue
            if not isinstance(data, dict) or "exchanges" not in data:
                continue
            for exchange in data["exchanges"]:
                request = exchange["request"]
                key = _exchange_key(request["model"], request["messages"])
                self._responses[key] = exchange["response"]["content"]
        logger.debug("loaded %d recorded exchanges from %s",
                     len(self._responses), directory)

    def __len__(self) -> int:
        return len(self._responses)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content.decode("utf-8"))
        key = _exchange_key(payload["model"], payload["messages"])
        content = self._responses.get(key)
        if content is None:
            return httpx.Response(
                404, json={"error": {"message": "no recorded exchange for request"}})
        return httpx.Response(200, json={
            "choices": [{"message": {"role": "assistant", "content": content}}]})


def fixture_backend(fixtures_dir: str | Path) -> ChatCompletionBackend:
    """Chat backend that only replays recorded exchanges."""
    return ChatCompletionBackend(
        "http://fixtures.invalid/v1", "recorded", "fixture",
        transport=FixtureTransport(fixtures_dir), retry_backoff=0.0)
