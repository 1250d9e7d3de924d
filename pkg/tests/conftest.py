from __future__ import annotations

from pathlib import Path

import pytest

from captune import load_config, parse_srt

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"
SRT_DIR = Path(__file__).parent / "data" / "srt"
SRT_MALFORMED_DIR = Path(__file__).parent / "data" / "srt_malformed"

JAMIE_CONFIG_PATH = FIXTURES_DIR / "jamie.captune.json"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def jamie_config_bytes() -> bytes:
    return JAMIE_CONFIG_PATH.read_bytes()


@pytest.fixture()
def jamie_config(jamie_config_bytes):
    return load_config(jamie_config_bytes)


@pytest.fixture(scope="session")
def bella_srt_bytes() -> bytes:
    return (FIXTURES_DIR / "bella.srt").read_bytes()


@pytest.fixture()
def bella_track(bella_srt_bytes):
    return parse_srt(bella_srt_bytes, source_name="bella.srt")


def srt_corpus_paths() -> list[Path]:
    return sorted(SRT_DIR.glob("*.srt"))


def srt_malformed_paths() -> list[Path]:
    return sorted(SRT_MALFORMED_DIR.glob("*.srt"))
