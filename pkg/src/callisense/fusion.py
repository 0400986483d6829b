"""Sensor-to-skeleton alignment and per-point parameter derivation.

Skeleton points get interpolated orientation and pressure; orientation turns
into a paper-plane tilt projection and a per-stroke relative rotation
(calibrated to zero at each stroke's first point). Continuous metrics are
discretized into tiers for display, with character-scope scales here and
stroke-scope scales recomputed by the comparison layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import PipelineConfig
from .errors import EmptyStream, EmptyValues, LengthMismatch
from .ingest import SensorStream
from .model import (
    ContactInterval,
    EnrichedPoint,
    Session,
    Stroke,
    Vec2,
    round_float,
)
from .skeleton import RawSkeleton, arc_length_positions, compute_speed


@dataclass(frozen=True)
class FusionConfig:
    n_tiers: int = 5
    ref_window_points: int = 3


@dataclass(frozen=True)
class TierScale:
    lo: float
    hi: float
    n: int
    scope: str  # "character" | "stroke"


@dataclass(frozen=True)
class AttachedSensor:
    yaw_deg: np.ndarray
    pitch_deg: np.ndarray
    roll_deg: np.ndarray
    pressure: np.ndarray  # float64, rounded to int at enrichment
    extrapolated: np.ndarray  # bool, True where t fell outside the stream


def wrap_diff_deg(d: float) -> float:
    """Map an angle difference to [-180, 180)."""
    return (d + 180.0) % 360.0 - 180.0


def _interp_angle(a: float, b: float, u: float) -> float:
    return a + u * wrap_diff_deg(b - a)


def attach_sensor(t_ms: np.ndarray, stream: SensorStream) -> AttachedSensor:
    """Interpolate the sensor stream at skeleton times.

    Pressure interpolates linearly; angles interpolate on unwrapped degrees
    (so 170 and -170 meet at 180, not 0). Times outside the stream clamp to
    the nearest sample and are flagged extrapolated.
    """
    if len(stream) == 0:
        raise EmptyStream("sensor stream has no samples")
    st = stream.t_ms
    n = t_ms.shape[0]
    yaw = np.empty(n)
    pitch = np.empty(n)
    roll = np.empty(n)
    pressure = np.empty(n)
    extrapolated = np.zeros(n, dtype=bool)
    for i, t in enumerate(t_ms):
        if t <= st[0]:
            k, u = 0, 0.0
            extrapolated[i] = t < st[0]
        elif t >= st[-1]:
            k, u = len(stream) - 1, 0.0
            extrapolated[i] = t > st[-1]
        else:
            k = int(np.searchsorted(st, t, side="right")) - 1
            u = (t - st[k]) / (st[k + 1] - st[k])
        if u == 0.0:
            yaw[i] = stream.yaw_deg[k]
            pitch[i] = stream.pitch_deg[k]
            roll[i] = stream.roll_deg[k]
            pressure[i] = float(stream.pressure_raw[k])
        else:
            yaw[i] = _interp_angle(stream.yaw_deg[k], stream.yaw_deg[k + 1], u)
            pitch[i] = _interp_angle(stream.pitch_deg[k], stream.pitch_deg[k + 1], u)
            roll[i] = _interp_angle(stream.roll_deg[k], stream.roll_deg[k + 1], u)
            pressure[i] = stream.pressure_raw[k] + u * (
                stream.pressure_raw[k + 1] - stream.pressure_raw[k]
            )
    return AttachedSensor(
        yaw_deg=yaw, pitch_deg=pitch, roll_deg=roll,
        pressure=pressure, extrapolated=extrapolated,
    )


def tilt_projection(yaw_deg: float, pitch_deg: float, roll_deg: float) -> tuple[float, float]:
    """Paper-plane projection of the brush axis.

    The axis is Rz(yaw) @ Ry(pitch) @ Rx(roll) @ (0,0,1) (intrinsic Z-Y-X);
    the returned (x, y) has magnitude sin(tilt-from-vertical).
    """
    cy, sy = math.cos(math.radians(yaw_deg)), math.sin(math.radians(yaw_deg))
    cp, sp = math.cos(math.radians(pitch_deg)), math.sin(math.radians(pitch_deg))
    cr, sr = math.cos(math.radians(roll_deg)), math.sin(math.radians(roll_deg))
    return cy * sp * cr + sy * sr, sy * sp * cr - cy * sr


def initial_reference_direction(sk: RawSkeleton, cfg: FusionConfig) -> tuple[float, float] | None:
    """Display-only zero direction for arrow rendering: the reverse of the
    initial advance, estimated from the first ref_window_points points."""
    n = len(sk)
    if n < 2:
        return None
    m = min(cfg.ref_window_points, n)
    dx = sk.xy[m - 1, 0] - sk.xy[0, 0]
    dy = sk.xy[m - 1, 1] - sk.xy[0, 1]
    norm = math.hypot(dx, dy)
    if norm == 0:
        return None
    return -dx / norm, -dy / norm


def relative_rotation(
    yaws: np.ndarray,
    sk: RawSkeleton,
    is_first_stroke: bool,
    cfg: FusionConfig,
) -> tuple[np.ndarray, tuple[float, float] | None]:
    """Per-point rotation relative to the stroke's first point.

    Accumulates wrapped yaw differences so rotation[0] is exactly 0 and a
    constant yaw offset leaves the output unchanged. Also returns the
    display-only zero direction when this is the character's first stroke;
    it anchors arrow rendering and does not enter the rotation values.
    """
    if yaws.shape[0] != len(sk):
        raise LengthMismatch(f"{yaws.shape[0]} yaws for {len(sk)} skeleton points")
    n = yaws.shape[0]
    rot = np.zeros(n)
    for i in range(1, n):
        rot[i] = rot[i - 1] + wrap_diff_deg(yaws[i] - yaws[i - 1])
    ref_dir = initial_reference_direction(sk, cfg) if is_first_stroke else None
    return rot, ref_dir


def rotation_from_stream(t_ms: np.ndarray, stream: SensorStream) -> np.ndarray:
    """Rotation relative to the first time, unwrapped over the raw samples.

    Works entirely in yaw-difference space: every term is a wrapped sample
    diff or its prefix sum, so a constant offset on the samples (which
    cancels exactly in each diff) can never leak rounding into the output.
    Numerically equivalent to relative_rotation on interpolated yaws.
    """
    if len(stream) == 0:
        raise EmptyStream("sensor stream has no samples")
    st = stream.t_ms
    y = stream.yaw_deg
    m = y.shape[0]
    d = np.zeros(m)  # d[k] = wrapped diff from sample k to k+1
    for k in range(m - 1):
        d[k] = wrap_diff_deg(y[k + 1] - y[k])
    cum = np.zeros(m)  # cum[k] = unwrapped yaw excursion at sample k
    if m > 1:
        np.cumsum(d[:-1], out=cum[1:])

    unwrapped = np.empty(t_ms.shape[0])
    for i, t in enumerate(t_ms):
        if t <= st[0]:
            k, u = 0, 0.0
        elif t >= st[-1]:
            k, u = m - 1, 0.0
        else:
            k = int(np.searchsorted(st, t, side="right")) - 1
            u = (t - st[k]) / (st[k + 1] - st[k])
        unwrapped[i] = cum[k] + u * d[k]
    return unwrapped - unwrapped[0]


def make_tier_scale(values, scope: str, n: int) -> TierScale:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise EmptyValues("cannot build a tier scale from no values")
    if not np.all(np.isfinite(arr)):
        raise EmptyValues("tier-scale values must be finite")
    return TierScale(lo=float(arr.min()), hi=float(arr.max()), n=n, scope=scope)


def tier(v: float, scale: TierScale) -> int:
    """Discretize v onto the scale; degenerate scales map everything to 0."""
    if scale.hi == scale.lo:
        return 0
    raw = math.floor((v - scale.lo) / (scale.hi - scale.lo) * scale.n)
    return max(0, min(scale.n - 1, raw))


@dataclass(frozen=True)
class StrokeParts:
    """Everything enrich needs for one stroke, pipeline-computed."""

    contact: ContactInterval
    sk: RawSkeleton
    pixel_count: int
    pixels: np.ndarray | None = None


def enrich(
    parts: list[StrokeParts],
    stream: SensorStream,
    cfg: PipelineConfig,
    *,
    session_id: str,
    role: str,
    character_label: str,
    canvas_w: int,
    canvas_h: int,
    frame_count: int,
    glyph_mask: str,
) -> Session:
    """Assemble enriched strokes into a schema-valid Session.

    Persisted tiers use character-scope scales (the rhythm view); stroke-scope
    re-tiering happens on demand in the comparison layer.
    """
    fcfg = FusionConfig(n_tiers=cfg.n_tiers, ref_window_points=cfg.ref_window_points)

    per_stroke = []
    for si, part in enumerate(parts):
        speeds = compute_speed(part.sk)
        arcs, _ = arc_length_positions(part.sk)
        attached = attach_sensor(part.sk.t_ms, stream)
        # difference-space rotation: bit-stable under constant yaw offsets
        rot = rotation_from_stream(part.sk.t_ms, stream)
        per_stroke.append((part, speeds, arcs, attached, rot))

    pressure_scale = make_tier_scale(
        np.concatenate([s[3].pressure for s in per_stroke]), "character", cfg.n_tiers
    )
    speed_scale = make_tier_scale(
        np.concatenate([s[1] for s in per_stroke]), "character", cfg.n_tiers
    )

    strokes = []
    for si, (part, speeds, arcs, attached, rot) in enumerate(per_stroke):
        points = []
        for i in range(len(part.sk)):
            dx, dy = tilt_projection(
                attached.yaw_deg[i], attached.pitch_deg[i], attached.roll_deg[i]
            )
            # truncate (not round) tilt at 6 decimals: rounding up could push
            # the stored magnitude past the |tilt| <= 1 invariant
            dx = math.trunc(dx * 1e6) / 1e6
            dy = math.trunc(dy * 1e6) / 1e6
            pressure = int(round(attached.pressure[i]))
            points.append(
                EnrichedPoint(
                    pos=Vec2(round_float(part.sk.xy[i, 0]), round_float(part.sk.xy[i, 1])),
                    t_ms=int(part.sk.t_ms[i]),
                    speed_px_s=round_float(speeds[i]),
                    pressure_raw=pressure,
                    pressure_tier=tier(attached.pressure[i], pressure_scale),
                    speed_tier=tier(speeds[i], speed_scale),
                    tilt_proj=Vec2(dx + 0.0, dy + 0.0),
                    rotation_deg=round_float(rot[i]),
                    arc_pos=round_float(arcs[i]),
                )
            )
        strokes.append(
            Stroke(
                index=si,
                contact=ContactInterval(part.contact.start_ms, part.contact.end_ms, si),
                skeleton=tuple(points),
                pixel_count=part.pixel_count,
                pixels=part.pixels,
            )
        )

    return Session(
        schema_version="1",
        id=session_id,
        role=role,
        character_label=character_label,
        canvas_w=canvas_w,
        canvas_h=canvas_h,
        frame_count=frame_count,
        config_fingerprint=cfg.fingerprint(),
        glyph_mask=glyph_mask,
        strokes=tuple(strokes),
    )
