"""Command-line front door: inspect, build-config, transform, sweep, serve.

Exit codes: 0 success, 1 internal error, 2 usage or validation error.
Logs are JSON lines on stderr; at debug level every rendered transformation
prompt is included so the logic stays auditable.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .backends import (
    ChatCompletionBackend,
    GenerativeBackend,
    MockBackend,
    content_word_count,
    fixture_backend,
)
from .captions import parse_srt, serialize_srt
from .config import build_config, export_config, load_config
from .context import load_sidecar
from .errors import CapTuneError, DisabledCell
from .prompting import (
    SoundRepresentation,
    VideoMetadata,
    ViewerPrefs,
    build_request,
    render_prompt,
)
from .space import ParamPoint
from .service import create_app

logger = logging.getLogger(__name__)

_USAGE_ERROR = 2
_INTERNAL_ERROR = 1

_REPRESENTATIONS = {
    "default": SoundRepresentation.DEFAULT,
    "source": SoundRepresentation.SOURCE_FOCUSED,
    "onomatopoeia": SoundRepresentation.ONOMATOPOEIA,
    "sensory": SoundRepresentation.SENSORY_QUALITY,
}


class JsonLineFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps({
            "level": record.levelname.lower(),
            "logger": record.name,
            "message": record.getMessage(),
        }, ensure_ascii=False)


def _setup_logging(level: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JsonLineFormatter())
    package_logger = logging.getLogger("captune")
    package_logger.handlers[:] = [handler]
    package_logger.setLevel(getattr(logging, level.upper()))


def _parse_point(raw: str, flag: str) -> ParamPoint:
    try:
        detail_s, expr_s = raw.split(",")
        return ParamPoint(detail=float(detail_s), expressiveness=float(expr_s))
    except ValueError as exc:
        raise CapTuneError(f"{flag} expects 'detail,expressiveness', got {raw!r}") from exc


def _make_backend(name: str, fixtures_dir: str | None) -> GenerativeBackend:
    if name == "mock":
        return MockBackend()
    if name == "fixture":
        return fixture_backend(fixtures_dir or "fixtures")
    return ChatCompletionBackend.from_env()


def cmd_inspect(args: argparse.Namespace) -> int:
    track = parse_srt(Path(args.srt).read_bytes(), lenient=args.lenient,
                      source_name=Path(args.srt).name)
    if args.json:
        print(json.dumps([{
            "index": c.index, "start_ms": c.start_ms, "end_ms": c.end_ms,
            "kind": c.kind.value,
            "category": c.category.value if c.category else None,
            "text": c.text,
        } for c in track.cues], ensure_ascii=False, indent=2))
        return 0
    print(f"{'#':>4}  {'start':>12}  {'end':>12}  {'kind':<6}  {'category':<16}  text")
    for c in track.cues:
        category = c.category.value if c.category else "-"
        text = c.text.replace("\n", " / ")
        print(f"{c.index:>4}  {c.start_ms:>12}  {c.end_ms:>12}  "
              f"{c.kind.value:<6}  {category:<16}  {text}")
    nsi = track.nsi_cues()
    print(f"\n{len(track.cues)} cues, {len(nsi)} non-speech")
    return 0


def cmd_build_config(args: argparse.Namespace) -> int:
    backend = _make_backend(args.backend, args.fixtures)
    track = parse_srt(Path(args.srt).read_bytes(), lenient=args.lenient,
                      source_name=Path(args.srt).name)
    descriptions = load_sidecar(args.descriptions) if args.descriptions else {}

    cue_estimates = {}
    if args.baseline:
        baseline = _parse_point(args.baseline, "--baseline")
    else:
        import statistics
        nsi = track.nsi_cues()
        if not nsi:
            raise CapTuneError("no non-speech cues to calibrate on")
        for cue in nsi:
            cue_estimates[cue.index] = backend.estimate(
                cue.text, descriptions.get(cue.index))
        baseline = ParamPoint(
            detail=float(statistics.median(
                e.detail for e in cue_estimates.values())),
            expressiveness=float(statistics.median(
                e.expressiveness for e in cue_estimates.values())),
        )
        logger.info("calibrated baseline detail=%g expressiveness=%g",
                    baseline.detail, baseline.expressiveness)

    config = build_config(
        track=track,
        metadata=VideoMetadata(title=args.title, genre=args.genre,
                               synopsis=args.synopsis),
        baseline=baseline,
        lower_anchor=_parse_point(args.lower, "--lower"),
        upper_anchor=_parse_point(args.upper, "--upper"),
        context_descriptions=descriptions,
        cue_estimates=cue_estimates,
    )
    payload = export_config(config)
    if args.output == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(args.output).write_bytes(payload)
        logger.info("wrote %s", args.output)
    return 0


def _transform_track(config, backend, prefs):
    """Yield (cue, transformed_text) over the whole track."""
    for cue in config.original_track.cues:
        if not cue.is_nsi or cue.locked:
            yield cue, cue.text
            continue
        preview = config.anchor_preview_texts.get(cue.index)
        req = build_request(
            cue, config.space, prefs, config.metadata,
            scene_context=config.context_descriptions.get(cue.index),
            current=config.space.baseline,
            lower_anchor_text=preview.lower_text if preview else None,
            upper_anchor_text=preview.upper_text if preview else None,
        )
        logger.debug("transform prompt for cue %d:\n%s",
                     cue.index, render_prompt(req))
        yield cue, backend.transform(req)


def cmd_transform(args: argparse.Namespace) -> int:
    config = load_config(Path(args.config).read_bytes())
    backend = _make_backend(args.backend, args.fixtures)
    target = ParamPoint(detail=args.detail, expressiveness=args.expr)
    if not config.space.contains(target):
        raise DisabledCell(
            f"target ({args.detail:g}, {args.expr:g}) is outside the "
            f"creator-defined boundaries",
            cell=[args.detail, args.expr])
    prefs = ViewerPrefs(
        target=target,
        representation=_REPRESENTATIONS[args.representation],
        genre_aligned=args.genre_aligned == "on",
    )
    out_track = type(config.original_track)(
        cues=[], source_name=config.original_track.source_name)
    for cue, text in _transform_track(config, backend, prefs):
        out_cue = type(cue)(index=cue.index, start_ms=cue.start_ms,
                            end_ms=cue.end_ms, text=text, kind=cue.kind,
                            category=cue.category, locked=cue.locked)
        out_track.cues.append(out_cue)
    payload = serialize_srt(out_track)
    if args.output == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(args.output).write_bytes(payload)
        logger.info("wrote %s", args.output)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(Path(args.config).read_bytes())
    backend = _make_backend(args.backend, args.fixtures)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.csv"

    with report_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["detail", "expressiveness", "status", "cue_index",
                         "content_words", "estimated_detail", "detail_drift",
                         "text"])
        for detail in range(1, 11):
            for expr in range(1, 11):
                cell = ParamPoint(float(detail), float(expr))
                if not config.space.contains(cell):
                    writer.writerow([detail, expr, "skipped", "", "", "", "", ""])
                    continue
                prefs = ViewerPrefs(
                    target=cell,
                    representation=_REPRESENTATIONS[args.representation])
                track = type(config.original_track)(
                    cues=[], source_name=config.original_track.source_name)
                for cue, text in _transform_track(config, backend, prefs):
                    track.cues.append(type(cue)(
                        index=cue.index, start_ms=cue.start_ms, end_ms=cue.end_ms,
                        text=text, kind=cue.kind, category=cue.category,
                        locked=cue.locked))
                    if cue.is_nsi and not cue.locked:
                        estimated = backend.estimate(text).detail
                        writer.writerow([
                            detail, expr, "ok", cue.index,
                            content_word_count(text), estimated,
                            round(estimated - detail, 6), text])
                cell_path = out_dir / f"track_d{detail}_e{expr}.srt"
                cell_path.write_bytes(serialize_srt(track))
    logger.info("wrote %s", report_path)
    print(f"sweep report: {report_path}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    backend = _make_backend(args.backend, args.fixtures)
    app = create_app(backend, data_dir=args.data_dir,
                     cors_origins=tuple(args.cors_origin))
    host, _, port = args.addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="captune",
        description="Creator-bounded, viewer-adaptive non-speech caption "
                    "transformation.")
    parser.add_argument("--log-level", default="info",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="list cues with NSI flags and categories")
    p.add_argument("srt")
    p.add_argument("--json", action="store_true")
    p.add_argument("--lenient", action="store_true",
                   help="skip malformed cues instead of failing")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("build-config",
                       help="calibrate, set anchors, and export a project config")
    p.add_argument("srt")
    p.add_argument("--lower", required=True, metavar="D,E")
    p.add_argument("--upper", required=True, metavar="D,E")
    p.add_argument("--baseline", metavar="D,E",
                   help="skip calibration and use these baseline values")
    p.add_argument("--title", default="")
    p.add_argument("--genre", default="")
    p.add_argument("--synopsis", default="")
    p.add_argument("--descriptions", help="descriptions.json sidecar path")
    p.add_argument("--backend", default="mock", choices=["mock", "live", "fixture"])
    p.add_argument("--fixtures", help="recorded-exchange directory for --backend fixture")
    p.add_argument("--lenient", action="store_true")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_build_config)

    p = sub.add_parser("transform", help="transform a whole track at fixed preferences")
    p.add_argument("config")
    p.add_argument("--detail", type=float, required=True)
    p.add_argument("--expr", type=float, required=True)
    p.add_argument("--repr", dest="representation", default="default",
                   choices=sorted(_REPRESENTATIONS))
    p.add_argument("--genre", dest="genre_aligned", default="off",
                   choices=["on", "off"])
    p.add_argument("--backend", default="mock", choices=["mock", "live", "fixture"])
    p.add_argument("--fixtures")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("sweep",
                       help="transform the track at every grid cell and report")
    p.add_argument("config")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--repr", dest="representation", default="default",
                   choices=sorted(_REPRESENTATIONS))
    p.add_argument("--backend", default="mock", choices=["mock", "live", "fixture"])
    p.add_argument("--fixtures")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the creator/viewer HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.add_argument("--backend", default="mock", choices=["mock", "live", "fixture"])
    p.add_argument("--fixtures")
    p.add_argument("--data-dir")
    p.add_argument("--cors-origin", action="append", default=["*"])
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.log_level)
    try:
        return args.func(args)
    except CapTuneError as exc:
        logger.error("%s", json.dumps(exc.to_payload(), ensure_ascii=False))
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return _USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_ERROR
    except Exception:  # pragma: no cover - last-resort diagnostics
        logger.exception("internal error")
        return _INTERNAL_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
