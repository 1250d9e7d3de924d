from __future__ import annotations

import csv
import json
import logging

import pytest

from captune import load_config, parse_srt
from captune.backends import content_word_count
from captune.cli import main

from conftest import FIXTURES_DIR, JAMIE_CONFIG_PATH


def test_inspect_table_lists_categories(capsys):
    assert main(["inspect", str(FIXTURES_DIR / "bella.srt")]) == 0
    out = capsys.readouterr().out
    assert "[SOFT PIANO MUSIC RISING]" in out
    assert "music" in out
    assert "10 cues, 7 non-speech" in out


def test_inspect_json_output(capsys):
    assert main(["inspect", str(FIXTURES_DIR / "bella.srt"), "--json"]) == 0
    cues = json.loads(capsys.readouterr().out)
    assert cues[0]["kind"] == "nsi"
    assert cues[4]["category"] == "music"


def test_inspect_empty_file_exits_2(tmp_path, capsys):
    empty = tmp_path / "empty.srt"
    empty.write_text("")
    assert main(["inspect", str(empty)]) == 2
    assert "EmptyFile" in capsys.readouterr().err


def test_build_config_with_mock_calibration(tmp_path):
    out = tmp_path / "bella.captune.json"
    code = main(["build-config", str(FIXTURES_DIR / "bella.srt"),
                 "--lower", "2,2", "--upper", "8,7",
                 "--title", "Bella", "--genre", "Animation",
                 "--descriptions", str(FIXTURES_DIR / "bella.descriptions.json"),
                 "-o", str(out)])
    assert code == 0
    config = load_config(out.read_bytes())
    assert config.space.baseline.detail == 3.0
    assert config.space.baseline.expressiveness == 4.0
    assert config.context_descriptions[1] == "stormy night, rain on rooftops"


def test_build_config_with_explicit_baseline(tmp_path):
    out = tmp_path / "out.json"
    code = main(["build-config", str(FIXTURES_DIR / "bella.srt"),
                 "--lower", "2,2", "--upper", "8,7", "--baseline", "3,2",
                 "-o", str(out)])
    assert code == 0
    assert load_config(out.read_bytes()).space.baseline.detail == 3.0


def test_build_config_rejects_bad_point(tmp_path, capsys):
    code = main(["build-config", str(FIXTURES_DIR / "bella.srt"),
                 "--lower", "nope", "--upper", "8,7",
                 "-o", str(tmp_path / "x.json")])
    assert code == 2


def test_transform_at_baseline_is_identity(tmp_path):
    out = tmp_path / "out.srt"
    code = main(["transform", str(JAMIE_CONFIG_PATH),
                 "--detail", "3", "--expr", "2", "-o", str(out)])
    assert code == 0
    original = parse_srt((FIXTURES_DIR / "bella.srt").read_bytes())
    transformed = parse_srt(out.read_bytes())
    assert [c.text for c in transformed.cues] == [c.text for c in original.cues]


def test_transform_emits_prompt_log_with_ratio_triples(tmp_path, caplog):
    caplog.set_level(logging.DEBUG, logger="captune.cli")
    out = tmp_path / "out.srt"
    code = main(["--log-level", "debug", "transform", str(JAMIE_CONFIG_PATH),
                 "--detail", "6", "--expr", "5", "-o", str(out)])
    assert code == 0
    prompts = [r.getMessage() for r in caplog.records
               if "transform prompt" in r.getMessage()]
    assert prompts
    joined = "\n".join(prompts)
    for needle in ("67%", "33%", "+50%", "60%", "40%", "+60%"):
        assert needle in joined


def test_transform_changes_nsi_but_not_speech(tmp_path):
    out = tmp_path / "out.srt"
    main(["transform", str(JAMIE_CONFIG_PATH),
          "--detail", "6", "--expr", "5", "-o", str(out)])
    original = parse_srt((FIXTURES_DIR / "bella.srt").read_bytes())
    transformed = parse_srt(out.read_bytes())
    for before, after in zip(original.cues, transformed.cues):
        if before.is_nsi:
            assert after.text != before.text
        else:
            assert after.text == before.text


def test_transform_out_of_bounds_cell_exits_2(tmp_path, capsys):
    code = main(["transform", str(JAMIE_CONFIG_PATH),
                 "--detail", "9", "--expr", "9", "-o", str(tmp_path / "x.srt")])
    assert code == 2
    assert "DisabledCell" in capsys.readouterr().err


def test_sweep_reports_and_is_deterministic(tmp_path):
    first_dir = tmp_path / "one"
    second_dir = tmp_path / "two"
    for out_dir in (first_dir, second_dir):
        assert main(["sweep", str(JAMIE_CONFIG_PATH),
                     "--out-dir", str(out_dir)]) == 0
    first = (first_dir / "report.csv").read_bytes()
    assert first == (second_dir / "report.csv").read_bytes()

    rows = list(csv.DictReader((first_dir / "report.csv").read_text().splitlines()))
    enabled_cells = {(r["detail"], r["expressiveness"])
                     for r in rows if r["status"] == "ok"}
    skipped_cells = {(r["detail"], r["expressiveness"])
                     for r in rows if r["status"] == "skipped"}
    assert len(enabled_cells) == 42  # 7 detail values x 6 expressiveness values
    assert len(skipped_cells) == 58
    assert len(list(first_dir.glob("track_d*_e*.srt"))) == 42

    # Word counts never shrink as the detail target grows, row by row.
    by_row = {}
    for row in rows:
        if row["status"] != "ok":
            continue
        key = (row["expressiveness"], row["cue_index"])
        by_row.setdefault(key, []).append(
            (int(row["detail"]), int(row["content_words"])))
    for series in by_row.values():
        counts = [count for _, count in sorted(series)]
        assert counts == sorted(counts)


def test_sweep_cell_tracks_parse(tmp_path):
    out_dir = tmp_path / "sweep"
    main(["sweep", str(JAMIE_CONFIG_PATH), "--out-dir", str(out_dir)])
    track = parse_srt((out_dir / "track_d6_e5.srt").read_bytes())
    assert content_word_count(track.cues[0].text) == 7


def test_serve_wires_uvicorn(monkeypatch):
    captured = {}

    def fake_run(app, host, port):
        captured["app"] = app
        captured["host"] = host
        captured["port"] = port

    import uvicorn
    monkeypatch.setattr(uvicorn, "run", fake_run)
    assert main(["serve", "--addr", "127.0.0.1:8123", "--backend", "mock"]) == 0
    assert captured["host"] == "127.0.0.1"
    assert captured["port"] == 8123
    routes = {route.path for route in captured["app"].routes}
    assert {"/projects", "/sessions", "/healthz", "/metrics"} <= routes


def test_serve_live_without_key_exits_2(monkeypatch, capsys):
    monkeypatch.delenv("CAPTUNE_API_KEY", raising=False)
    assert main(["serve", "--backend", "live"]) == 2
    assert "BackendUnavailable" in capsys.readouterr().err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as excinfo:
        main(["transform"])  # missing required flags
    assert excinfo.value.code == 2
