"""Command-line entry point: process, synth, compare, serve.

Exit codes: 0 success, 2 input errors (missing/unparseable files), 3
processing errors; error messages name the failing stage. Log verbosity
comes from CALLISENSE_LOG (error|warn|info|debug).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import compare as compare_mod
from .config import PipelineConfig, load_config
from .errors import (
    DimensionMismatch,
    EmptySession,
    InputError,
    ProcessingError,
)
from .ingest import read_pgm
from .model import parse_session
from .synth import NoiseSpec, generate_session, load_script

EXIT_INPUT = 2
EXIT_PROCESSING = 3

log = logging.getLogger("callisense")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
               "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = os.environ.get("CALLISENSE_LOG", "warn").lower()
    logging.basicConfig(level=_LOG_LEVELS.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _stage_of(exc: Exception) -> str:
    # DimensionMismatch is segment's precondition even when caught at load time
    if isinstance(exc, DimensionMismatch):
        return "segment"
    module = type(exc).__module__.rsplit(".", 1)[-1]
    return {"errors": "pipeline"}.get(module, module)


def _fail(stage: str, exc: Exception, code: int) -> int:
    print(f"error [{stage}]: {exc}", file=sys.stderr)
    return code


def cmd_process(args) -> int:
    cfg = PipelineConfig()
    try:
        if args.config:
            cfg = load_config(args.config)
    except InputError as exc:
        return _fail("config", exc, EXIT_INPUT)
    from .pipeline import process_to_files

    try:
        session, stats = process_to_files(
            args.manifest,
            args.out,
            cfg,
            role=args.role,
            character_label=args.label,
            keep_frames=args.keep_frames,
        )
    except InputError as exc:
        return _fail("ingest", exc, EXIT_INPUT)
    except ProcessingError as exc:
        return _fail(_stage_of(exc), exc, EXIT_PROCESSING)
    print(
        f"{session.id}: strokes={stats.strokes} "
        f"skeleton_points={stats.skeleton_points} "
        f"discarded_pixels={stats.discarded_pixels}"
    )
    return 0


def cmd_synth(args) -> int:
    try:
        script = load_script(args.script)
        noise = NoiseSpec(
            gap_px_sd=args.noise_gap,
            pressure_sd=args.noise_pressure,
            angle_sd_deg=args.noise_angle,
        )
        manifest, truth = generate_session(
            script,
            args.out,
            fps=args.fps,
            sensor_hz=args.hz,
            noise=noise,
            seed=args.seed,
            occlusion_frames=args.occlusion_frames,
        )
    except InputError as exc:
        return _fail("synth", exc, EXIT_INPUT)
    except ProcessingError as exc:
        return _fail("synth", exc, EXIT_PROCESSING)
    print(
        f"{args.out}: frames={len(manifest.frame_files)} strokes={len(truth.strokes)} "
        f"canvas={truth.canvas_w}x{truth.canvas_h}"
    )
    return 0


def _load_session_with_glyph(path: Path):
    session = parse_session(path.read_text(encoding="utf-8"))
    glyph_path = path.parent / session.glyph_mask
    bits = read_pgm(glyph_path) < 128
    return session, bits


def cmd_compare(args) -> int:
    try:
        teacher, t_bits = _load_session_with_glyph(Path(args.teacher))
        student, s_bits = _load_session_with_glyph(Path(args.student))
    except FileNotFoundError as exc:
        return _fail("compare", exc, EXIT_INPUT)
    except InputError as exc:
        return _fail("compare", exc, EXIT_INPUT)
    try:
        report = compare_mod.build_report(
            teacher, student, t_bits, s_bits,
            n_samples=args.samples, grid_ms=args.grid_ms,
        )
    except (EmptySession, ProcessingError) as exc:
        return _fail("compare", exc, EXIT_PROCESSING)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(compare_mod.serialize_report(report), encoding="utf-8")
    print(f"{out}: pairs={len(report.pairs)} mismatch={len(report.mismatch)}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    data_dir = Path(args.data)
    if not data_dir.is_dir():
        return _fail("serve", InputError(f"data directory not found: {data_dir}"), EXIT_INPUT)
    serve(data_dir, args.port, args.ui)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="callisense")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("process", help="run the capture pipeline on a frame manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--role", choices=["teacher", "student"], default="student")
    p.add_argument("--label", default="")
    p.add_argument("--keep-frames", action="store_true",
                   help="retain corrected frames as PNGs for the timeline view")
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("synth", help="generate a scripted synthetic session")
    p.add_argument("--script", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fps", type=int, default=30)
    p.add_argument("--hz", type=int, default=100)
    p.add_argument("--noise-gap", type=float, default=0.0)
    p.add_argument("--noise-pressure", type=float, default=0.0)
    p.add_argument("--noise-angle", type=float, default=0.0)
    p.add_argument("--occlusion-frames", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", help="build a teacher/student comparison report")
    p.add_argument("--teacher", required=True)
    p.add_argument("--student", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--samples", type=int, default=compare_mod.DEFAULT_SAMPLES)
    p.add_argument("--grid-ms", type=int, default=compare_mod.DEFAULT_GRID_MS)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="serve processed sessions over HTTP")
    p.add_argument("--data", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--ui", default=None, help="directory of built UI assets to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
