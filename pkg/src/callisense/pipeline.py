"""End-to-end processing: manifest in, enriched session + glyph mask out."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .errors import EmptyStroke, NoContacts
from .fusion import StrokeParts, enrich
from .ingest import FrameManifest, load_inputs, load_manifest, write_pgm
from .model import ContactInterval, Session, serialize_session
from .segment import ContactConfig, detect_contacts, group_strokes, timestamp_pixels
from .skeleton import SkeletonConfig, extract_skeleton

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProcessStats:
    strokes: int
    skeleton_points: int
    discarded_pixels: int
    dropped_sensor_samples: int
    dropped_tip_samples: int
    empty_contacts: int


def _stroke_frames(pixels: np.ndarray, end_ms: int) -> list[tuple[int, np.ndarray]]:
    """Group a stroke's (x, y, t) pixels into per-frame increments.

    Slack-rescued pixels carry first-appearance times past the contact end;
    their frames are remapped to end_ms and merged so skeleton times stay
    inside the contact window.
    """
    if pixels.shape[0] == 0:
        return []
    t = np.minimum(pixels[:, 2], end_ms)
    frames = []
    for t_ms in np.unique(t):
        sel = t == t_ms
        frames.append((int(t_ms), pixels[sel, :2]))
    return frames


def process(
    manifest: FrameManifest,
    cfg: PipelineConfig,
    *,
    session_id: str,
    role: str = "student",
    character_label: str = "",
) -> tuple[Session, np.ndarray, ProcessStats]:
    """Run the full pipeline; returns (session, glyph ink bits, stats)."""
    masks, sensor, tip, load_report = load_inputs(manifest, cfg.ink_threshold)

    contacts = detect_contacts(
        tip,
        ContactConfig(
            t_low_px=cfg.t_low_px,
            t_high_px=cfg.t_high_px,
            min_down_ms=cfg.min_down_ms,
            min_up_ms=cfg.min_up_ms,
        ),
    )
    if not contacts:
        raise NoContacts("tip trace never enters contact")

    pixmap = timestamp_pixels(masks)
    grouping = group_strokes(pixmap, contacts, cfg.slack_ms)

    skcfg = SkeletonConfig(
        min_increment_px=cfg.min_increment_px,
        max_jump_px=cfg.max_jump_px,
        smooth_window=cfg.smooth_window,
    )
    parts = []
    empty = 0
    for contact, pixels in zip(contacts, grouping.stroke_pixels):
        frames = _stroke_frames(pixels, contact.end_ms)
        try:
            sk = extract_skeleton(frames, skcfg)
        except EmptyStroke:
            empty += 1
            log.warning("contact [%d, %d] ms produced no usable ink; skipped",
                        contact.start_ms, contact.end_ms)
            continue
        parts.append(
            StrokeParts(
                contact=ContactInterval(contact.start_ms, contact.end_ms, len(parts)),
                sk=sk,
                pixel_count=int(pixels.shape[0]),
                pixels=pixels,
            )
        )
    if not parts:
        raise EmptyStroke("no contact interval produced a skeleton")

    session = enrich(
        parts,
        sensor,
        cfg,
        session_id=session_id,
        role=role,
        character_label=character_label,
        canvas_w=manifest.dst_w,
        canvas_h=manifest.dst_h,
        frame_count=len(masks),
        glyph_mask=f"{session_id}.glyph.pgm",
    )
    glyph_bits = pixmap.stamp_ms >= 0
    stats = ProcessStats(
        strokes=len(session.strokes),
        skeleton_points=sum(len(s.skeleton) for s in session.strokes),
        discarded_pixels=grouping.discarded,
        dropped_sensor_samples=load_report.dropped_sensor_samples,
        dropped_tip_samples=load_report.dropped_tip_samples,
        empty_contacts=empty,
    )
    return session, glyph_bits, stats


def process_to_files(
    manifest_path: str | Path,
    out_path: str | Path,
    cfg: PipelineConfig,
    *,
    role: str = "student",
    character_label: str = "",
    keep_frames: bool = False,
) -> tuple[Session, ProcessStats]:
    """CLI-facing wrapper: writes <out>.json, the glyph sidecar, and optionally
    retained corrected frames as PNG under <stem>.frames/."""
    manifest = load_manifest(manifest_path)
    out_path = Path(out_path)
    session_id = out_path.stem
    session, glyph_bits, stats = process(
        manifest, cfg, session_id=session_id, role=role, character_label=character_label
    )
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(serialize_session(session), encoding="utf-8")
    glyph_img = np.where(glyph_bits, 0, 255).astype(np.uint8)
    write_pgm(out_path.parent / session.glyph_mask, glyph_img)

    if keep_frames:
        from PIL import Image

        from .ingest import compute_homography, correct_perspective, dst_rect_corners, read_pgm

        frames_dir = out_path.parent / f"{session_id}.frames"
        frames_dir.mkdir(exist_ok=True)
        hmat = compute_homography(
            manifest.paper_quad, dst_rect_corners(manifest.dst_w, manifest.dst_h)
        )
        for k, file in enumerate(manifest.frame_files):
            corrected = correct_perspective(read_pgm(file), hmat, (manifest.dst_w, manifest.dst_h))
            Image.fromarray(corrected, mode="L").save(frames_dir / f"{k:06d}.png")
    return session, stats
