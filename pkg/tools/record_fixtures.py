#!/usr/bin/env python3
"""Regenerate the recorded-exchange fixtures and the Jamie project config.

Drives the real HTTP service through the creator flow with a scripted
transport: every outbound chat-completion request is paired with the next
scripted response and written to fixtures/jamie.json, so the fixture
replay transport will match byte-for-byte at test time. Re-run after any
change to prompt templates or request builders.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import httpx
from fastapi.testclient import TestClient

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from captune.backends import ChatCompletionBackend  # noqa: E402
from captune.service import create_app  # noqa: E402

FIXTURES = REPO / "fixtures"

# Responses in backend-call order for the scripted creator flow below.
SCRIPT = [
    # calibrate: one estimate per NSI cue (1, 3, 5, 6, 7, 9, 10)
    '{"detail": 3, "expressiveness": 2}',
    '{"detail": 3, "expressiveness": 2}',
    '{"detail": 4, "expressiveness": 3}',
    '{"detail": 2, "expressiveness": 1}',
    '{"detail": 4, "expressiveness": 2}',
    '{"detail": 4, "expressiveness": 3}',
    '{"detail": 2, "expressiveness": 2}',
    # preview cue 1, sliders (0, 5): transform
    "[Thunder crashes violently]",
    # preview cue 1, sliders (6, 5): transform + recalibration estimate
    "[Deep, rumbling thunder crashes violently, echoing across the sky]",
    '{"detail": 7.2, "expressiveness": 8}',
    # preview cue 1, sliders (0, 5) after recalibration: transform
    "[Thunder roars and crashes furiously]",
]


class RecordingTransport(httpx.BaseTransport):
    def __init__(self, script: list[str]):
        self.script = list(script)
        self.exchanges: list[dict] = []

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content.decode("utf-8"))
        if not self.script:
            raise RuntimeError("script exhausted; flow made an unplanned call")
        content = self.script.pop(0)
        self.exchanges.append({
            "request": {"model": payload["model"], "messages": payload["messages"]},
            "response": {"content": content},
        })
        return httpx.Response(200, json={
            "choices": [{"message": {"role": "assistant", "content": content}}]})


def main() -> None:
    transport = RecordingTransport(SCRIPT)
    backend = ChatCompletionBackend(
        "http://fixtures.invalid/v1", "recorded", "fixture",
        transport=transport, retry_backoff=0.0)
    client = TestClient(create_app(backend))

    srt = (FIXTURES / "bella.srt").read_text(encoding="utf-8")
    descriptions = json.loads(
        (FIXTURES / "bella.descriptions.json").read_text(encoding="utf-8"))

    created = client.post("/projects", json={
        "srt": srt,
        "source_name": "bella.srt",
        "metadata": {"title": "Bella", "genre": "Animation",
                     "synopsis": "A stray cat's journey toward adoption."},
        "descriptions": descriptions,
    })
    created.raise_for_status()
    project_id = created.json()["project_id"]

    calibrated = client.post(f"/projects/{project_id}/calibrate")
    calibrated.raise_for_status()
    assert calibrated.json()["detail"] == 3.0, calibrated.json()
    assert calibrated.json()["expressiveness"] == 2.0, calibrated.json()

    client.post(f"/projects/{project_id}/anchors", json={
        "lower": {"detail": 2, "expressiveness": 2},
        "upper": {"detail": 8, "expressiveness": 7},
    }).raise_for_status()

    exported = client.get(f"/projects/{project_id}/export")
    exported.raise_for_status()
    (FIXTURES / "jamie.captune.json").write_bytes(exported.content)

    first = client.post(f"/projects/{project_id}/preview", json={
        "cue_index": 1, "slider_detail": 0, "slider_expr": 5})
    first.raise_for_status()
    assert first.json()["values"]["expressiveness"] == 6.0, first.json()

    second = client.post(f"/projects/{project_id}/preview", json={
        "cue_index": 1, "slider_detail": 6, "slider_expr": 5})
    second.raise_for_status()
    assert second.json()["values"]["detail"] == 7.2, second.json()
    assert second.json()["recalibrated_expressiveness"] == 8.0, second.json()

    third = client.post(f"/projects/{project_id}/preview", json={
        "cue_index": 1, "slider_detail": 0, "slider_expr": 5})
    third.raise_for_status()
    assert third.json()["values"]["expressiveness"] == 8.0, third.json()

    if transport.script:
        raise RuntimeError(f"{len(transport.script)} scripted responses unused")

    out = FIXTURES / "jamie.json"
    out.write_text(json.dumps({"exchanges": transport.exchanges},
                              ensure_ascii=False, indent=2) + "\n",
                   encoding="utf-8")
    print(f"wrote {out} ({len(transport.exchanges)} exchanges)")
    print(f"wrote {FIXTURES / 'jamie.captune.json'}")


if __name__ == "__main__":
    main()
