"""Teacher/student comparison analytics.

Strokes are paired strictly by order, per-point metrics are resampled onto a
shared arc-position grid so curves line up vertically, pressure differences
are signed student - teacher (positive = student over-pressing), and progress
rows share one time grid so a slower writer simply gets a longer row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStroke, EmptyGlyph, EmptySession, LengthMismatch
from .fusion import TierScale, make_tier_scale
from .model import (
    ComparisonReport,
    Curve,
    ExtremityBox,
    ProgressRow,
    Session,
    Stroke,
    StrokePair,
    TierScaleSpec,
    Vec2,
    dumps_canonical,
    round_float,
)

DEFAULT_SAMPLES = 100
DEFAULT_GRID_MS = 50


def extremity_box(glyph_bits: np.ndarray) -> ExtremityBox:
    """The four extreme ink pixels; ties break toward smaller x (then y)."""
    ys, xs = np.nonzero(glyph_bits)
    if ys.size == 0:
        raise EmptyGlyph("glyph mask has no ink")

    def pick(primary, secondary, minimize_primary):
        target = primary.min() if minimize_primary else primary.max()
        at = primary == target
        j = np.flatnonzero(at)[np.argmin(secondary[at])]
        return Vec2(float(xs[j]), float(ys[j]))

    top = pick(ys, xs, True)
    bottom = pick(ys, xs, False)
    left = pick(xs, ys, True)
    right = pick(xs, ys, False)
    return ExtremityBox(top=top, bottom=bottom, left=left, right=right)


@dataclass(frozen=True)
class OverlayTransform:
    """Pure translation for compositing the student glyph; no raster mutation."""

    dx: float = 0.0
    dy: float = 0.0

    def compose(self, other: "OverlayTransform") -> "OverlayTransform":
        return OverlayTransform(self.dx + other.dx, self.dy + other.dy)

    def apply(self, p: Vec2) -> Vec2:
        return Vec2(p.x + self.dx, p.y + self.dy)

    def apply_box(self, box: ExtremityBox) -> ExtremityBox:
        return ExtremityBox(
            top=self.apply(box.top),
            bottom=self.apply(box.bottom),
            left=self.apply(box.left),
            right=self.apply(box.right),
        )


def overlay_transform(dx: float, dy: float) -> OverlayTransform:
    return OverlayTransform(dx, dy)


def pair_strokes(teacher: Session, student: Session) -> tuple[list[tuple[int, int]], list[dict]]:
    """Order-based pairing; extra strokes are reported, never an error."""
    nt, ns = len(teacher.strokes), len(student.strokes)
    n = min(nt, ns)
    pairs = [(i, i) for i in range(n)]
    mismatch = []
    for i in range(n, nt):
        mismatch.append({"role": "teacher", "index": i})
    for i in range(n, ns):
        mismatch.append({"role": "student", "index": i})
    return pairs, mismatch


def resample_curve(arc_pos, values, n: int) -> Curve:
    """Linear interpolation of values at n uniform arc positions.

    Repeated arc positions (plateaus) resolve to the last value at that
    position; the first and last output samples are exactly the first and
    last input values. A zero-span input yields the flagged constant mean.
    """
    arc = np.asarray(arc_pos, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if arc.shape[0] != vals.shape[0]:
        raise LengthMismatch(f"{arc.shape[0]} positions vs {vals.shape[0]} values")
    if n < 2:
        raise LengthMismatch("need at least 2 output samples")
    if arc.shape[0] == 0:
        raise LengthMismatch("cannot resample an empty stroke")
    if np.any(np.diff(arc) < 0) or arc[0] < 0 or arc[-1] > 1:
        raise LengthMismatch("arc positions must be non-decreasing within [0, 1]")

    if arc[-1] == arc[0]:
        mean = float(vals.mean())
        return Curve(values=tuple(round_float(mean) for _ in range(n)), degenerate=True)

    out = np.empty(n)
    qs = np.linspace(0.0, 1.0, n)
    last = arc.shape[0] - 1
    for i, q in enumerate(qs):
        j = int(np.searchsorted(arc, q, side="right")) - 1
        if j < 0:
            out[i] = vals[0]
        elif j >= last or arc[j] == q:
            out[i] = vals[min(j, last)]
        else:
            u = (q - arc[j]) / (arc[j + 1] - arc[j])
            out[i] = vals[j] + u * (vals[j + 1] - vals[j])
    out[0] = vals[0]
    out[-1] = vals[-1]
    return Curve(values=tuple(round_float(v) for v in out))


@dataclass(frozen=True)
class DiffProfile:
    diff: Curve
    max_abs_diff: float
    argmax_pos: float


def pressure_diff_profile(teacher: Curve, student: Curve) -> DiffProfile:
    """Pointwise student - teacher; argmax of |diff| breaks ties toward 0."""
    if len(teacher.values) != len(student.values):
        raise LengthMismatch(
            f"curve lengths differ: {len(teacher.values)} vs {len(student.values)}"
        )
    tv = np.asarray(teacher.values)
    sv = np.asarray(student.values)
    diff = sv - tv
    k = int(np.argmax(np.abs(diff)))  # argmax returns the first (smallest position) tie
    n = diff.shape[0]
    return DiffProfile(
        diff=Curve(values=tuple(round_float(v) for v in diff)),
        max_abs_diff=round_float(abs(diff[k])),
        argmax_pos=round_float(k / (n - 1)),
    )


def _stroke_times_arcs(stroke: Stroke) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray([p.t_ms for p in stroke.skeleton], dtype=np.int64)
    a = np.asarray([p.arc_pos for p in stroke.skeleton])
    return t, a


def progress_row(stroke: Stroke, grid_ms: int) -> ProgressRow:
    """Arc position on a uniform grid from the stroke's own start.

    The grid runs to the first multiple of grid_ms at or past the stroke
    duration (arc clamps to 1 there), so row lengths compare durations
    directly.
    """
    t, arc = _stroke_times_arcs(stroke)
    duration = int(t[-1] - t[0])
    if duration <= 0:
        raise DegenerateStroke(f"stroke {stroke.index} has zero duration")
    n = math.ceil(duration / grid_ms) + 1
    ts = np.arange(n, dtype=np.float64) * grid_ms
    vals = np.interp(ts, (t - t[0]).astype(np.float64), arc)
    return ProgressRow(grid_ms=grid_ms, arc_positions=tuple(round_float(v) for v in vals))


def progress_rows(t_stroke: Stroke, s_stroke: Stroke, grid_ms: int) -> tuple[ProgressRow, ProgressRow]:
    return progress_row(t_stroke, grid_ms), progress_row(s_stroke, grid_ms)


def _stroke_values(stroke: Stroke, attr: str) -> np.ndarray:
    return np.asarray([getattr(p, attr) for p in stroke.skeleton], dtype=np.float64)


def _stroke_arcs(stroke: Stroke) -> np.ndarray:
    return np.asarray([p.arc_pos for p in stroke.skeleton], dtype=np.float64)


def _scale_spec(scale: TierScale) -> TierScaleSpec:
    return TierScaleSpec(lo=round_float(scale.lo), hi=round_float(scale.hi), n=scale.n)


def _progress_or_single(stroke: Stroke, grid_ms: int) -> ProgressRow:
    try:
        return progress_row(stroke, grid_ms)
    except DegenerateStroke:
        return ProgressRow(grid_ms=grid_ms, arc_positions=(0.0,))


def build_report(
    teacher: Session,
    student: Session,
    teacher_glyph: np.ndarray,
    student_glyph: np.ndarray,
    n_samples: int = DEFAULT_SAMPLES,
    grid_ms: int = DEFAULT_GRID_MS,
    n_tiers: int = 5,
) -> ComparisonReport:
    if not teacher.strokes or not student.strokes:
        raise EmptySession("both sessions need at least one stroke")
    pairs_idx, mismatch = pair_strokes(teacher, student)

    pairs = []
    for ti, si in pairs_idx:
        ts, ss = teacher.strokes[ti], student.strokes[si]
        t_arc, s_arc = _stroke_arcs(ts), _stroke_arcs(ss)

        t_pressure = resample_curve(t_arc, _stroke_values(ts, "pressure_raw"), n_samples)
        s_pressure = resample_curve(s_arc, _stroke_values(ss, "pressure_raw"), n_samples)
        diff = pressure_diff_profile(t_pressure, s_pressure)
        t_speed = resample_curve(t_arc, _stroke_values(ts, "speed_px_s"), n_samples)
        s_speed = resample_curve(s_arc, _stroke_values(ss, "speed_px_s"), n_samples)

        # stroke-scope scales over the union so both writers share one ramp
        pressure_scale = make_tier_scale(
            np.concatenate([_stroke_values(ts, "pressure_raw"), _stroke_values(ss, "pressure_raw")]),
            "stroke",
            n_tiers,
        )
        speed_scale = make_tier_scale(
            np.concatenate([_stroke_values(ts, "speed_px_s"), _stroke_values(ss, "speed_px_s")]),
            "stroke",
            n_tiers,
        )
        pairs.append(
            StrokePair(
                index=ti,
                pressure_teacher=t_pressure,
                pressure_student=s_pressure,
                pressure_diff=diff.diff,
                max_abs_diff=diff.max_abs_diff,
                argmax_pos=diff.argmax_pos,
                speed_teacher=t_speed,
                speed_student=s_speed,
                progress_teacher=_progress_or_single(ts, grid_ms),
                progress_student=_progress_or_single(ss, grid_ms),
                pressure_scale=_scale_spec(pressure_scale),
                speed_scale=_scale_spec(speed_scale),
            )
        )

    return ComparisonReport(
        teacher_id=teacher.id,
        student_id=student.id,
        pairs=tuple(pairs),
        mismatch=tuple(mismatch),
        teacher_box=extremity_box(teacher_glyph),
        student_box=extremity_box(student_glyph),
        mizige_size=max(teacher.canvas_w, teacher.canvas_h, student.canvas_w, student.canvas_h),
    )


# ---------------------------------------------------------------------------
# Report document


def _box_doc(box: ExtremityBox) -> dict:
    def vec(v: Vec2) -> dict:
        return {"x": round_float(v.x), "y": round_float(v.y)}

    x0, y0, x1, y1 = box.rect
    return {
        "top": vec(box.top),
        "bottom": vec(box.bottom),
        "left": vec(box.left),
        "right": vec(box.right),
        "rect": {"x0": round_float(x0), "y0": round_float(y0),
                 "x1": round_float(x1), "y1": round_float(y1)},
    }


def report_to_doc(report: ComparisonReport) -> dict:
    return {
        "teacher_id": report.teacher_id,
        "student_id": report.student_id,
        "stroke_count": len(report.pairs),
        "mismatch": list(report.mismatch),
        "pairs": [
            {
                "index": p.index,
                "pressure": {
                    "teacher": list(p.pressure_teacher.values),
                    "student": list(p.pressure_student.values),
                    "diff": list(p.pressure_diff.values),
                    "max_abs_diff": p.max_abs_diff,
                    "argmax_pos": p.argmax_pos,
                },
                "speed": {
                    "teacher": list(p.speed_teacher.values),
                    "student": list(p.speed_student.values),
                },
                "progress": {
                    "teacher": {
                        "grid_ms": p.progress_teacher.grid_ms,
                        "arc": list(p.progress_teacher.arc_positions),
                    },
                    "student": {
                        "grid_ms": p.progress_student.grid_ms,
                        "arc": list(p.progress_student.arc_positions),
                    },
                },
                "tiers": {
                    "pressure_scale": {
                        "lo": p.pressure_scale.lo, "hi": p.pressure_scale.hi, "n": p.pressure_scale.n,
                    },
                    "speed_scale": {
                        "lo": p.speed_scale.lo, "hi": p.speed_scale.hi, "n": p.speed_scale.n,
                    },
                },
            }
            for p in report.pairs
        ],
        "glyph": {
            "teacher_box": _box_doc(report.teacher_box),
            "student_box": _box_doc(report.student_box),
            "mizige": {"size": report.mizige_size},
        },
    }


def serialize_report(report: ComparisonReport) -> str:
    return dumps_canonical(report_to_doc(report))
