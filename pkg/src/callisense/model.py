"""Core domain types, the versioned session document, and schema validation.

All types are immutable after construction and safe to share across threads.
The session document (schema v"1") is the persistence contract: validation is
closed (unknown fields rejected) and serialization is byte-stable, so
serialize(validate(serialize(s))) is a fixpoint.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .errors import InvariantError, SchemaError

SCHEMA_VERSION = "1"
ROLES = ("teacher", "student")

# Session floats are rounded to this many decimals before persisting; it is
# what makes serialization byte-stable and round-trips field-exact.
FLOAT_DECIMALS = 6


def round_float(x: float) -> float:
    r = round(float(x), FLOAT_DECIMALS)
    return 0.0 if r == 0.0 else r  # avoid "-0.0" in documents


def normalize_deg(deg: float) -> float:
    """Map an angle in degrees to (-180, 180]."""
    n = (deg + 180.0) % 360.0 - 180.0
    return 180.0 if n == -180.0 else n


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvariantError(f"Vec2 components must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class Orientation:
    """Brush-head attitude in degrees; yaw normalized to (-180, 180] on construction."""

    yaw_deg: float
    pitch_deg: float
    roll_deg: float

    def __post_init__(self):
        for name in ("yaw_deg", "pitch_deg", "roll_deg"):
            if not math.isfinite(getattr(self, name)):
                raise InvariantError(f"Orientation.{name} must be finite")
        if not -90.0 <= self.pitch_deg <= 90.0:
            raise InvariantError(f"Orientation.pitch_deg out of [-90, 90]: {self.pitch_deg}")
        object.__setattr__(self, "yaw_deg", normalize_deg(self.yaw_deg))


@dataclass(frozen=True)
class SensorSample:
    t_ms: int
    orientation: Orientation
    pressure_raw: int

    def __post_init__(self):
        if self.t_ms < 0:
            raise InvariantError(f"SensorSample.t_ms must be >= 0, got {self.t_ms}")
        if not 0 <= self.pressure_raw <= 1023:
            raise InvariantError(f"SensorSample.pressure_raw out of [0, 1023]: {self.pressure_raw}")


@dataclass(frozen=True)
class ContactInterval:
    start_ms: int
    end_ms: int
    index: int

    def __post_init__(self):
        if self.start_ms >= self.end_ms:
            raise InvariantError(
                f"ContactInterval {self.index}: start {self.start_ms} >= end {self.end_ms}"
            )


@dataclass(frozen=True)
class TimedPixel:
    """One ink pixel with its first-appearance time."""

    pos: Vec2
    t_ms: int


@dataclass(frozen=True)
class EnrichedPoint:
    """A skeleton point carrying every per-point writing parameter."""

    pos: Vec2
    t_ms: int
    speed_px_s: float
    pressure_raw: int
    pressure_tier: int
    speed_tier: int
    tilt_proj: Vec2
    rotation_deg: float
    arc_pos: float


@dataclass(frozen=True)
class Stroke:
    index: int
    contact: ContactInterval
    skeleton: tuple[EnrichedPoint, ...]
    pixel_count: int
    # Packed TimedPixels (n, 3) int64 columns x, y, t_ms. In-memory only;
    # never persisted, so excluded from equality.
    pixels: Optional[np.ndarray] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Session:
    schema_version: str
    id: str
    role: str
    character_label: str
    canvas_w: int
    canvas_h: int
    frame_count: int
    config_fingerprint: str
    glyph_mask: str
    strokes: tuple[Stroke, ...]


@dataclass(frozen=True)
class ExtremityBox:
    """The four extreme ink pixels of a glyph and the rectangle they span."""

    top: Vec2
    bottom: Vec2
    left: Vec2
    right: Vec2

    def __post_init__(self):
        if self.top.y > self.bottom.y or self.left.x > self.right.x:
            raise InvariantError("ExtremityBox extremities are not ordered")

    @property
    def rect(self) -> tuple[float, float, float, float]:
        """(x0, y0, x1, y1) axis-aligned; center lines sit at its midpoints."""
        return (self.left.x, self.top.y, self.right.x, self.bottom.y)


@dataclass(frozen=True)
class Curve:
    """Values sampled at N uniform arc positions spanning [0, 1]."""

    values: tuple[float, ...]
    degenerate: bool = False

    def __post_init__(self):
        if len(self.values) < 2:
            raise InvariantError("Curve needs at least 2 samples")

    @property
    def positions(self) -> tuple[float, ...]:
        n = len(self.values)
        return tuple(i / (n - 1) for i in range(n))


@dataclass(frozen=True)
class ProgressRow:
    """Arc position sampled on a uniform time grid from stroke start."""

    grid_ms: int
    arc_positions: tuple[float, ...]

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(i * self.grid_ms for i in range(len(self.arc_positions)))


@dataclass(frozen=True)
class StrokePair:
    index: int
    pressure_teacher: Curve
    pressure_student: Curve
    pressure_diff: Curve
    max_abs_diff: float
    argmax_pos: float
    speed_teacher: Curve
    speed_student: Curve
    progress_teacher: ProgressRow
    progress_student: ProgressRow
    pressure_scale: "TierScaleSpec"
    speed_scale: "TierScaleSpec"


@dataclass(frozen=True)
class TierScaleSpec:
    lo: float
    hi: float
    n: int


@dataclass(frozen=True)
class ComparisonReport:
    teacher_id: str
    student_id: str
    pairs: tuple[StrokePair, ...]
    mismatch: tuple[dict, ...]
    teacher_box: ExtremityBox
    student_box: ExtremityBox
    mizige_size: int


# ---------------------------------------------------------------------------
# Validation


def _fail_schema(path: str, msg: str):
    raise SchemaError(f"{path}: {msg}")


def _fail(path: str, msg: str):
    raise InvariantError(f"{path}: {msg}")


def _req_keys(obj: dict, keys: tuple[str, ...], path: str):
    if not isinstance(obj, dict):
        _fail_schema(path, "expected an object")
    missing = [k for k in keys if k not in obj]
    if missing:
        _fail_schema(path, f"missing required field(s) {missing}")
    extra = [k for k in obj if k not in keys]
    if extra:
        _fail_schema(path, f"unknown field(s) {extra}")


def _as_int(v: Any, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail_schema(path, f"expected integer, got {type(v).__name__}")
    return v


def _as_float(v: Any, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail_schema(path, f"expected number, got {type(v).__name__}")
    f = float(v)
    if not math.isfinite(f):
        _fail(path, f"must be finite, got {f}")
    return f


def _as_str(v: Any, path: str) -> str:
    if not isinstance(v, str):
        _fail_schema(path, f"expected string, got {type(v).__name__}")
    return v


_SESSION_KEYS = (
    "schema_version",
    "id",
    "role",
    "character_label",
    "canvas",
    "frame_count",
    "config_fingerprint",
    "glyph_mask",
    "strokes",
)
_STROKE_KEYS = ("index", "contact", "skeleton", "pixel_count")
_POINT_KEYS = (
    "x",
    "y",
    "t_ms",
    "speed_px_s",
    "pressure_raw",
    "pressure_tier",
    "speed_tier",
    "tilt",
    "rotation_deg",
    "arc_pos",
)


def _validate_point(p: dict, path: str) -> EnrichedPoint:
    _req_keys(p, _POINT_KEYS, path)
    x = _as_float(p["x"], f"{path}.x")
    y = _as_float(p["y"], f"{path}.y")
    t_ms = _as_int(p["t_ms"], f"{path}.t_ms")
    speed = _as_float(p["speed_px_s"], f"{path}.speed_px_s")
    if speed < 0:
        _fail(f"{path}.speed_px_s", f"must be >= 0, got {speed}")
    pressure = _as_int(p["pressure_raw"], f"{path}.pressure_raw")
    if not 0 <= pressure <= 1023:
        _fail(f"{path}.pressure_raw", f"out of [0, 1023]: {pressure}")
    p_tier = _as_int(p["pressure_tier"], f"{path}.pressure_tier")
    s_tier = _as_int(p["speed_tier"], f"{path}.speed_tier")
    if p_tier < 0 or s_tier < 0:
        _fail(f"{path}", "tiers must be >= 0")
    tilt = p["tilt"]
    _req_keys(tilt, ("dx", "dy"), f"{path}.tilt")
    dx = _as_float(tilt["dx"], f"{path}.tilt.dx")
    dy = _as_float(tilt["dy"], f"{path}.tilt.dy")
    if math.hypot(dx, dy) > 1.0 + 1e-9:
        _fail(f"{path}.tilt", f"projection magnitude exceeds 1: ({dx}, {dy})")
    rotation = _as_float(p["rotation_deg"], f"{path}.rotation_deg")
    arc = _as_float(p["arc_pos"], f"{path}.arc_pos")
    if not 0.0 <= arc <= 1.0:
        _fail(f"{path}.arc_pos", f"out of [0, 1]: {arc}")
    return EnrichedPoint(
        pos=Vec2(x, y),
        t_ms=t_ms,
        speed_px_s=speed,
        pressure_raw=pressure,
        pressure_tier=p_tier,
        speed_tier=s_tier,
        tilt_proj=Vec2(dx, dy),
        rotation_deg=rotation,
        arc_pos=arc,
    )


def _validate_stroke(s: dict, path: str, tau_pre_ms: int, tau_post_ms: int) -> Stroke:
    _req_keys(s, _STROKE_KEYS, path)
    index = _as_int(s["index"], f"{path}.index")
    contact_doc = s["contact"]
    _req_keys(contact_doc, ("start_ms", "end_ms"), f"{path}.contact")
    start = _as_int(contact_doc["start_ms"], f"{path}.contact.start_ms")
    end = _as_int(contact_doc["end_ms"], f"{path}.contact.end_ms")
    if start >= end:
        _fail(f"{path}.contact", f"start_ms {start} >= end_ms {end}")
    pixel_count = _as_int(s["pixel_count"], f"{path}.pixel_count")
    if pixel_count < 0:
        _fail(f"{path}.pixel_count", "must be >= 0")

    skeleton_doc = s["skeleton"]
    if not isinstance(skeleton_doc, list) or not skeleton_doc:
        _fail_schema(f"{path}.skeleton", "expected a non-empty array")
    points = [_validate_point(p, f"{path}.skeleton[{i}]") for i, p in enumerate(skeleton_doc)]

    for i in range(1, len(points)):
        if points[i].t_ms <= points[i - 1].t_ms:
            _fail(f"{path}.skeleton[{i}].t_ms", "skeleton times must be strictly increasing")
        if points[i].arc_pos < points[i - 1].arc_pos:
            _fail(f"{path}.skeleton[{i}].arc_pos", "arc_pos must be non-decreasing")
    if points[0].arc_pos != 0.0:
        _fail(f"{path}.skeleton[0].arc_pos", f"must be 0, got {points[0].arc_pos}")
    if len(points) > 1 and points[-1].arc_pos != 1.0:
        _fail(f"{path}.skeleton[{len(points) - 1}].arc_pos", f"must be 1, got {points[-1].arc_pos}")
    lo, hi = start - tau_pre_ms, end + tau_post_ms
    for i, p in enumerate(points):
        if not lo <= p.t_ms <= hi:
            _fail(f"{path}.skeleton[{i}].t_ms", f"{p.t_ms} outside contact window [{lo}, {hi}]")

    return Stroke(
        index=index,
        contact=ContactInterval(start_ms=start, end_ms=end, index=index),
        skeleton=tuple(points),
        pixel_count=pixel_count,
    )


def validate_session(doc: dict, tau_pre_ms: int = 0, tau_post_ms: int = 0) -> Session:
    """Validate a session document and return the typed Session.

    Raises SchemaError for shape problems and InvariantError for value
    violations; both name the offending path.
    """
    _req_keys(doc, _SESSION_KEYS, "$")
    version = _as_str(doc["schema_version"], "$.schema_version")
    if version != SCHEMA_VERSION:
        _fail_schema("$.schema_version", f"unsupported version {version!r}")
    session_id = _as_str(doc["id"], "$.id")
    role = _as_str(doc["role"], "$.role")
    if role not in ROLES:
        _fail("$.role", f"must be one of {ROLES}, got {role!r}")
    label = _as_str(doc["character_label"], "$.character_label")
    canvas = doc["canvas"]
    _req_keys(canvas, ("w", "h"), "$.canvas")
    w = _as_int(canvas["w"], "$.canvas.w")
    h = _as_int(canvas["h"], "$.canvas.h")
    if w <= 0 or h <= 0:
        _fail("$.canvas", f"dimensions must be > 0, got {w}x{h}")
    frame_count = _as_int(doc["frame_count"], "$.frame_count")
    if frame_count < 0:
        _fail("$.frame_count", "must be >= 0")
    fingerprint = _as_str(doc["config_fingerprint"], "$.config_fingerprint")
    glyph_mask = _as_str(doc["glyph_mask"], "$.glyph_mask")

    strokes_doc = doc["strokes"]
    if not isinstance(strokes_doc, list):
        _fail_schema("$.strokes", "expected an array")
    if not strokes_doc:
        _fail("$.strokes", "strokes required >= 1")
    strokes = [
        _validate_stroke(s, f"$.strokes[{i}]", tau_pre_ms, tau_post_ms)
        for i, s in enumerate(strokes_doc)
    ]
    for i, stroke in enumerate(strokes):
        if stroke.index != i:
            _fail(f"$.strokes[{i}].index", f"stroke index gap: expected {i}, got {stroke.index}")
    for i in range(1, len(strokes)):
        if strokes[i].contact.start_ms < strokes[i - 1].contact.end_ms:
            _fail(f"$.strokes[{i}].contact", "contact intervals overlap or are out of order")

    return Session(
        schema_version=version,
        id=session_id,
        role=role,
        character_label=label,
        canvas_w=w,
        canvas_h=h,
        frame_count=frame_count,
        config_fingerprint=fingerprint,
        glyph_mask=glyph_mask,
        strokes=tuple(strokes),
    )


# ---------------------------------------------------------------------------
# Serialization


def _point_doc(p: EnrichedPoint) -> dict:
    return {
        "x": round_float(p.pos.x),
        "y": round_float(p.pos.y),
        "t_ms": p.t_ms,
        "speed_px_s": round_float(p.speed_px_s),
        "pressure_raw": p.pressure_raw,
        "pressure_tier": p.pressure_tier,
        "speed_tier": p.speed_tier,
        "tilt": {"dx": round_float(p.tilt_proj.x), "dy": round_float(p.tilt_proj.y)},
        "rotation_deg": round_float(p.rotation_deg),
        "arc_pos": round_float(p.arc_pos),
    }


def session_to_doc(s: Session) -> dict:
    return {
        "schema_version": s.schema_version,
        "id": s.id,
        "role": s.role,
        "character_label": s.character_label,
        "canvas": {"w": s.canvas_w, "h": s.canvas_h},
        "frame_count": s.frame_count,
        "config_fingerprint": s.config_fingerprint,
        "glyph_mask": s.glyph_mask,
        "strokes": [
            {
                "index": st.index,
                "contact": {"start_ms": st.contact.start_ms, "end_ms": st.contact.end_ms},
                "skeleton": [_point_doc(p) for p in st.skeleton],
                "pixel_count": st.pixel_count,
            }
            for st in s.strokes
        ],
    }


def dumps_canonical(doc: Any) -> str:
    """Canonical document text: UTF-8-safe, LF, insertion-ordered keys."""
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"), allow_nan=False) + "\n"


def serialize_session(s: Session, tau_pre_ms: int = 0, tau_post_ms: int = 0) -> str:
    """Serialize; validates the produced document so only valid sessions leave."""
    doc = session_to_doc(s)
    validate_session(doc, tau_pre_ms=tau_pre_ms, tau_post_ms=tau_post_ms)
    return dumps_canonical(doc)


def parse_session(text: str, tau_pre_ms: int = 0, tau_post_ms: int = 0) -> Session:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"session is not valid JSON: {exc}") from exc
    return validate_session(doc, tau_pre_ms=tau_pre_ms, tau_post_ms=tau_post_ms)
