"""Scripted synthetic writing sessions with ground truth.

Renders a session exactly as the capture rig would see it — cumulative ink
frames, a tip-gap trace, and a sensor log — from per-stroke motion scripts,
and writes the scripted truth alongside so the whole pipeline can be scored
end to end. Output is byte-deterministic for a fixed seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadProfile, EmptyScript, InputError, MissingFile
from .ingest import FrameManifest, write_pgm
from .kernels import stamp_discs
from .model import Session, dumps_canonical, round_float
from .fusion import wrap_diff_deg

TRUTH_STEP_MS = 5
REST_PRESSURE = 60
STROKE_GAP_PX = 2.0
PAUSE_GAP_PX = 30.0


@dataclass(frozen=True)
class NoiseSpec:
    gap_px_sd: float = 0.0
    pressure_sd: float = 0.0
    angle_sd_deg: float = 0.0


@dataclass(frozen=True)
class StrokeScript:
    path: np.ndarray  # (m, 2) float64 polyline control points
    duration_ms: int
    speed_profile: str = "uniform"  # or "ease-in-out"
    pressure_profile: tuple = ((0.0, 500),)  # (arc_pos, pressure_raw) breakpoints
    yaw_profile: tuple = ((0.0, 0.0),)
    pitch_profile: tuple = ((0.0, 15.0),)
    roll_profile: tuple = ((0.0, 0.0),)
    brush_radius_px: float = 6.0
    inter_stroke_pause_ms: int = 300

    def __post_init__(self):
        path = np.asarray(self.path, dtype=np.float64)
        object.__setattr__(self, "path", path)
        if path.ndim != 2 or path.shape[0] < 2 or path.shape[1] != 2:
            raise BadProfile("stroke path needs at least 2 control points")
        if self.duration_ms <= 0:
            raise BadProfile("duration_ms must be > 0")
        if self.speed_profile not in ("uniform", "ease-in-out"):
            raise BadProfile(f"unknown speed_profile {self.speed_profile!r}")
        if self.brush_radius_px <= 0:
            raise BadProfile("brush_radius_px must be > 0")
        if self.inter_stroke_pause_ms < 0:
            raise BadProfile("inter_stroke_pause_ms must be >= 0")
        for name in ("pressure_profile", "yaw_profile", "pitch_profile", "roll_profile"):
            prof = tuple((float(a), float(v)) for a, v in getattr(self, name))
            if not prof:
                raise BadProfile(f"{name} needs at least one breakpoint")
            arcs = [a for a, _ in prof]
            if arcs != sorted(arcs) or arcs[0] < 0 or arcs[-1] > 1:
                raise BadProfile(f"{name} breakpoints must be non-decreasing in [0, 1]")
            object.__setattr__(self, name, prof)
        for a, p in self.pressure_profile:
            if not 0 <= p <= 1023:
                raise BadProfile(f"pressure breakpoint out of [0, 1023]: {p}")
        for a, v in self.pitch_profile:
            if not -90 <= v <= 90:
                raise BadProfile(f"pitch breakpoint out of [-90, 90]: {v}")


@dataclass(frozen=True)
class TruthStroke:
    index: int
    start_ms: int
    end_ms: int
    t_ms: np.ndarray
    xy: np.ndarray  # (n, 2)
    speed_px_s: np.ndarray
    yaw_deg: np.ndarray
    pitch_deg: np.ndarray
    roll_deg: np.ndarray
    pressure_raw: np.ndarray
    rotation_deg: np.ndarray


@dataclass(frozen=True)
class GroundTruth:
    canvas_w: int
    canvas_h: int
    strokes: tuple[TruthStroke, ...]
    # (h, w) first-painter stroke index per pixel, -1 where unpainted.
    # In-memory oracle only; not serialized, so absent after load_truth.
    stroke_map: np.ndarray | None = None


@dataclass(frozen=True)
class ScoreMetrics:
    stroke_count_match: bool
    skeleton_rmse_px: float
    speed_corr: float
    rotation_mae_deg: float
    contact_iou: float

    def as_dict(self) -> dict:
        return {
            "stroke_count_match": self.stroke_count_match,
            "skeleton_rmse_px": self.skeleton_rmse_px,
            "speed_corr": self.speed_corr,
            "rotation_mae_deg": self.rotation_mae_deg,
            "contact_iou": self.contact_iou,
        }


# ---------------------------------------------------------------------------
# Script geometry


def _segment_lengths(path: np.ndarray) -> tuple[np.ndarray, float]:
    d = np.hypot(np.diff(path[:, 0]), np.diff(path[:, 1]))
    return np.concatenate([[0.0], np.cumsum(d)]), float(d.sum())


def _point_at(path: np.ndarray, cum: np.ndarray, total: float, s: float) -> tuple[float, float]:
    """Position at normalized arc distance s along the polyline."""
    if total == 0.0:
        return float(path[0, 0]), float(path[0, 1])
    d = min(max(s, 0.0), 1.0) * total
    k = int(np.searchsorted(cum, d, side="right")) - 1
    k = min(k, cum.shape[0] - 2)
    seg = cum[k + 1] - cum[k]
    u = 0.0 if seg == 0 else (d - cum[k]) / seg
    x = path[k, 0] + u * (path[k + 1, 0] - path[k, 0])
    y = path[k, 1] + u * (path[k + 1, 1] - path[k, 1])
    return float(x), float(y)


def _progress(profile: str, u: float) -> float:
    if profile == "uniform":
        return u
    return u * u * (3.0 - 2.0 * u)  # ease-in-out, peak rate 1.5x at midpoint


def _progress_rate(profile: str, u: float) -> float:
    if profile == "uniform":
        return 1.0
    return 6.0 * u * (1.0 - u)


def _interp_profile(profile: tuple, s: float) -> float:
    arcs = [a for a, _ in profile]
    vals = [v for _, v in profile]
    return float(np.interp(s, arcs, vals))


# ---------------------------------------------------------------------------
# Script file


def load_script(path: str | Path) -> list[StrokeScript]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"script not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"script is not valid JSON: {path}: {exc}") from exc
    if not isinstance(doc, list):
        raise InputError("script root must be a list of strokes")
    out = []
    for i, entry in enumerate(doc):
        try:
            out.append(
                StrokeScript(
                    path=np.asarray(entry["path"], dtype=np.float64),
                    duration_ms=int(entry["duration_ms"]),
                    speed_profile=entry.get("speed_profile", "uniform"),
                    pressure_profile=tuple(map(tuple, entry.get("pressure_profile", [[0.0, 500]]))),
                    yaw_profile=tuple(map(tuple, entry.get("yaw_profile", [[0.0, 0.0]]))),
                    pitch_profile=tuple(map(tuple, entry.get("pitch_profile", [[0.0, 15.0]]))),
                    roll_profile=tuple(map(tuple, entry.get("roll_profile", [[0.0, 0.0]]))),
                    brush_radius_px=float(entry.get("brush_radius_px", 6.0)),
                    inter_stroke_pause_ms=int(entry.get("inter_stroke_pause_ms", 300)),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed stroke {i} in {path}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# Generation


def _stroke_timeline(script: list[StrokeScript]) -> list[tuple[int, int]]:
    spans = []
    cursor = 0
    for s in script:
        start = cursor + s.inter_stroke_pause_ms
        end = start + s.duration_ms
        spans.append((start, end))
        cursor = end
    return spans


def _sensor_value_at(script, spans, t: int, which: str) -> float:
    """Profile value at session time t; pauses hold the nearest stroke's edge value."""
    if t < spans[0][0]:
        return _interp_profile(getattr(script[0], which), 0.0)
    for (start, end), s in zip(spans, script):
        if start <= t <= end:
            u = (t - start) / s.duration_ms
            return _interp_profile(getattr(s, which), _progress(s.speed_profile, u))
    # in a pause: hold the end value of the last finished stroke
    prev_idx = 0
    for i, (_, end) in enumerate(spans):
        if end < t:
            prev_idx = i
    return _interp_profile(getattr(script[prev_idx], which), 1.0)


def generate_session(
    script: list[StrokeScript],
    out_dir: str | Path,
    fps: int = 30,
    sensor_hz: int = 100,
    noise: NoiseSpec = NoiseSpec(),
    seed: int = 0,
    occlusion_frames: int = 0,
) -> tuple[FrameManifest, GroundTruth]:
    """Write frames, sensor log, tip trace, manifest, and truth to out_dir."""
    if not script:
        raise EmptyScript("script has no strokes")
    if fps <= 0 or sensor_hz <= 0:
        raise InputError("fps and sensor_hz must be > 0")
    out_dir = Path(out_dir)
    (out_dir / "frames").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    spans = _stroke_timeline(script)
    total_ms = spans[-1][1] + script[-1].inter_stroke_pause_ms

    rmax = max(s.brush_radius_px for s in script)
    all_pts = np.concatenate([s.path for s in script])
    canvas_w = int(math.ceil(all_pts[:, 0].max() + 4 * rmax))
    canvas_h = int(math.ceil(all_pts[:, 1].max() + 4 * rmax))

    frame_dt = 1000.0 / fps
    n_frames = int(math.floor(total_ms / frame_dt)) + 1
    frame_times = [int(round(k * frame_dt)) for k in range(n_frames)]

    geoms = [_segment_lengths(s.path) for s in script]

    def tip_at(si: int, t: float) -> tuple[float, float]:
        s = script[si]
        start, end = spans[si]
        u = min(max((t - start) / s.duration_ms, 0.0), 1.0)
        cum, total = geoms[si]
        return _point_at(s.path, cum, total, _progress(s.speed_profile, u))

    # Dense deposit samples per stroke (arc spacing <= 0.25 px) with their
    # deposit frame: the first frame whose capture time is >= deposit time.
    ft = np.asarray(frame_times, dtype=np.float64)
    deposits = []  # (frame_idx, stroke_idx, x, y)
    for si, s in enumerate(script):
        cum, total = geoms[si]
        m = max(int(math.ceil(4.0 * total)), 32)
        for j in range(m + 1):
            u = j / m
            t_dep = spans[si][0] + u * s.duration_ms
            x, y = _point_at(s.path, cum, total, _progress(s.speed_profile, u))
            f = int(np.searchsorted(ft, t_dep, side="left"))
            if f >= n_frames:
                f = n_frames - 1
            deposits.append((f, si, x, y))
    deposits.sort(key=lambda d: d[0])

    # Occlusion events: a shadow square sits over the tip for k pen-down
    # frames starting mid-stroke and lifts k frames after it appeared, so ink
    # deposited under it stays hidden until the lift frame.
    event_frames: dict[int, tuple[int, int]] = {}  # frame index -> (stroke, lift frame)
    if occlusion_frames > 0:
        for si, (start, end) in enumerate(spans):
            down = [k for k, t in enumerate(frame_times) if start <= t <= end]
            if not down:
                continue
            mid = down[len(down) // 2]
            lift = mid + occlusion_frames
            for k in range(mid, min(lift, down[-1] + 1)):
                event_frames[k] = (si, lift)

    deposit_frame = np.full((canvas_h, canvas_w), -1, dtype=np.int64)
    visible_frame = np.full((canvas_h, canvas_w), -1, dtype=np.int64)
    stroke_map = np.full((canvas_h, canvas_w), -1, dtype=np.int64)
    scratch = np.zeros((canvas_h, canvas_w), dtype=np.uint8)
    di = 0
    for k in range(n_frames):
        batch = []
        while di < len(deposits) and deposits[di][0] == k:
            batch.append(deposits[di])
            di += 1
        if not batch:
            continue
        # strokes stamp in order so the first painter wins within a frame too
        for si in sorted({b[1] for b in batch}):
            scratch[:] = 0
            pts = np.asarray([(x, y) for _, s, x, y in batch if s == si])
            stamp_discs(scratch, pts[:, 0], pts[:, 1], script[si].brush_radius_px, value=1)
            new_ys, new_xs = np.nonzero((scratch == 1) & (deposit_frame < 0))
            deposit_frame[new_ys, new_xs] = k
            stroke_map[new_ys, new_xs] = si
            visible = np.full(new_ys.shape[0], k, dtype=np.int64)
            if k in event_frames and event_frames[k][0] == si:
                _, lift = event_frames[k]
                tx, ty = tip_at(si, frame_times[k])
                half = 3.0 * script[si].brush_radius_px
                in_shadow = (np.abs(new_xs + 0.5 - tx) <= half) & (np.abs(new_ys + 0.5 - ty) <= half)
                visible[in_shadow] = lift
            visible_frame[new_ys, new_xs] = visible

    for k, t in enumerate(frame_times):
        img = np.full((canvas_h, canvas_w), 255, dtype=np.uint8)
        img[(visible_frame >= 0) & (visible_frame <= k)] = 0
        write_pgm(out_dir / "frames" / f"{k:06d}.pgm", img)

    # Tip trace and sensor log share the sensor clock grid.
    sensor_dt = 1000.0 / sensor_hz
    n_sensor = int(math.floor(total_ms / sensor_dt)) + 1
    sensor_times = [int(round(j * sensor_dt)) for j in range(n_sensor)]

    def in_stroke(t: int) -> bool:
        return any(start <= t <= end for start, end in spans)

    tip_lines = ["t_ms,gap_px"]
    for t in sensor_times:
        gap = STROKE_GAP_PX if in_stroke(t) else PAUSE_GAP_PX
        if noise.gap_px_sd > 0:
            gap = max(0.0, gap + rng.normal(0.0, noise.gap_px_sd))
        tip_lines.append(f"{t},{gap:.6f}")
    (out_dir / "tip.csv").write_text("\n".join(tip_lines) + "\n", encoding="utf-8")

    def quant(v: float) -> float:
        # angles are logged as multiples of 2^-10 deg: exactly representable
        # in binary and in <= 10 decimal digits, so they round-trip through
        # the CSV and stay exact under integer-degree offsets
        return round(v * 1024.0) / 1024.0

    sensor_lines = ["t_ms,yaw_deg,pitch_deg,roll_deg,pressure_raw"]
    for t in sensor_times:
        yaw = _sensor_value_at(script, spans, t, "yaw_profile")
        pitch = _sensor_value_at(script, spans, t, "pitch_profile")
        roll = _sensor_value_at(script, spans, t, "roll_profile")
        pressure = _sensor_value_at(script, spans, t, "pressure_profile") if in_stroke(t) else float(REST_PRESSURE)
        if noise.angle_sd_deg > 0:
            yaw += rng.normal(0.0, noise.angle_sd_deg)
            pitch = float(np.clip(pitch + rng.normal(0.0, noise.angle_sd_deg), -90, 90))
            roll += rng.normal(0.0, noise.angle_sd_deg)
        p = int(round(pressure + (rng.normal(0.0, noise.pressure_sd) if noise.pressure_sd > 0 else 0.0)))
        p = max(0, min(1023, p))
        sensor_lines.append(f"{t},{quant(yaw)!r},{quant(pitch)!r},{quant(roll)!r},{p}")
    (out_dir / "sensor.csv").write_text("\n".join(sensor_lines) + "\n", encoding="utf-8")

    manifest_doc = {
        "frames": [{"file": f"frames/{k:06d}.pgm", "t_ms": t} for k, t in enumerate(frame_times)],
        "paper_quad": [[0, 0], [canvas_w, 0], [canvas_w, canvas_h], [0, canvas_h]],
        "dst_size": {"w": canvas_w, "h": canvas_h},
        "sensor_log": "sensor.csv",
        "tip_trace": "tip.csv",
        "sensor_clock_offset_ms": 0,
        "tip_clock_offset_ms": 0,
    }
    (out_dir / "manifest.json").write_text(dumps_canonical(manifest_doc), encoding="utf-8")

    truth_strokes = []
    for si, s in enumerate(script):
        start, end = spans[si]
        cum, total = geoms[si]
        ts = list(range(start, end + 1, TRUTH_STEP_MS))
        if ts[-1] != end:
            ts.append(end)
        t_arr = np.asarray(ts, dtype=np.int64)
        n = t_arr.shape[0]
        xy = np.empty((n, 2))
        speed = np.empty(n)
        yaw = np.empty(n)
        pitch = np.empty(n)
        roll = np.empty(n)
        pressure = np.empty(n, dtype=np.int64)
        for j, t in enumerate(ts):
            u = (t - start) / s.duration_ms
            prog = _progress(s.speed_profile, u)
            xy[j] = _point_at(s.path, cum, total, prog)
            speed[j] = total * _progress_rate(s.speed_profile, u) / s.duration_ms * 1000.0
            yaw[j] = _interp_profile(s.yaw_profile, prog)
            pitch[j] = _interp_profile(s.pitch_profile, prog)
            roll[j] = _interp_profile(s.roll_profile, prog)
            pressure[j] = int(round(_interp_profile(s.pressure_profile, prog)))
        rotation = np.zeros(n)
        for j in range(1, n):
            rotation[j] = rotation[j - 1] + wrap_diff_deg(yaw[j] - yaw[j - 1])
        truth_strokes.append(
            TruthStroke(
                index=si, start_ms=start, end_ms=end, t_ms=t_arr, xy=xy,
                speed_px_s=speed, yaw_deg=yaw, pitch_deg=pitch, roll_deg=roll,
                pressure_raw=pressure, rotation_deg=rotation,
            )
        )
    truth = GroundTruth(canvas_w=canvas_w, canvas_h=canvas_h, strokes=tuple(truth_strokes),
                        stroke_map=stroke_map)
    (out_dir / "truth.json").write_text(serialize_truth(truth), encoding="utf-8")

    from .ingest import load_manifest

    return load_manifest(out_dir / "manifest.json"), truth


# ---------------------------------------------------------------------------
# Truth document


def serialize_truth(truth: GroundTruth) -> str:
    doc = {
        "canvas": {"w": truth.canvas_w, "h": truth.canvas_h},
        "strokes": [
            {
                "index": s.index,
                "contact": {"start_ms": s.start_ms, "end_ms": s.end_ms},
                "samples": [
                    {
                        "t_ms": int(s.t_ms[j]),
                        "x": round_float(s.xy[j, 0]),
                        "y": round_float(s.xy[j, 1]),
                        "speed_px_s": round_float(s.speed_px_s[j]),
                        "yaw_deg": round_float(s.yaw_deg[j]),
                        "pitch_deg": round_float(s.pitch_deg[j]),
                        "roll_deg": round_float(s.roll_deg[j]),
                        "pressure_raw": int(s.pressure_raw[j]),
                        "rotation_deg": round_float(s.rotation_deg[j]),
                    }
                    for j in range(s.t_ms.shape[0])
                ],
            }
            for s in truth.strokes
        ],
    }
    return dumps_canonical(doc)


def load_truth(path: str | Path) -> GroundTruth:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"truth file not found: {path}")
    doc = json.loads(path.read_text(encoding="utf-8"))
    strokes = []
    for s in doc["strokes"]:
        samples = s["samples"]
        n = len(samples)
        t = np.asarray([p["t_ms"] for p in samples], dtype=np.int64)
        xy = np.asarray([[p["x"], p["y"]] for p in samples])
        strokes.append(
            TruthStroke(
                index=int(s["index"]),
                start_ms=int(s["contact"]["start_ms"]),
                end_ms=int(s["contact"]["end_ms"]),
                t_ms=t,
                xy=xy,
                speed_px_s=np.asarray([p["speed_px_s"] for p in samples]),
                yaw_deg=np.asarray([p["yaw_deg"] for p in samples]),
                pitch_deg=np.asarray([p["pitch_deg"] for p in samples]),
                roll_deg=np.asarray([p["roll_deg"] for p in samples]),
                pressure_raw=np.asarray([p["pressure_raw"] for p in samples], dtype=np.int64),
                rotation_deg=np.asarray([p["rotation_deg"] for p in samples]),
            )
        )
    return GroundTruth(
        canvas_w=int(doc["canvas"]["w"]), canvas_h=int(doc["canvas"]["h"]), strokes=tuple(strokes)
    )


# ---------------------------------------------------------------------------
# Scoring


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    if a.size < 2:
        return 1.0
    sa, sb = a.std(), b.std()
    if sa < 1e-12 or sb < 1e-12:
        return 1.0 if (sa < 1e-12 and sb < 1e-12) else 0.0
    return float(np.corrcoef(a, b)[0, 1])


def score_against_truth(session: Session, truth: GroundTruth) -> ScoreMetrics:
    """Nearest-time association of skeleton points to truth samples, per stroke."""
    n_pairs = min(len(session.strokes), len(truth.strokes))
    count_match = len(session.strokes) == len(truth.strokes)

    sq_err = []
    speed_pairs_a = []
    speed_pairs_b = []
    rot_err = []
    ious = []
    for i in range(n_pairs):
        stroke = session.strokes[i]
        ts = truth.strokes[i]
        tt = ts.t_ms.astype(np.float64)
        for p in stroke.skeleton:
            j = int(np.clip(np.searchsorted(tt, p.t_ms), 0, tt.shape[0] - 1))
            if j > 0 and abs(tt[j - 1] - p.t_ms) <= abs(tt[j] - p.t_ms):
                j -= 1
            sq_err.append((p.pos.x - ts.xy[j, 0]) ** 2 + (p.pos.y - ts.xy[j, 1]) ** 2)
            speed_pairs_a.append(p.speed_px_s)
            speed_pairs_b.append(ts.speed_px_s[j])
            rot_err.append(abs(p.rotation_deg - ts.rotation_deg[j]))
        s1, e1 = stroke.contact.start_ms, stroke.contact.end_ms
        s2, e2 = ts.start_ms, ts.end_ms
        inter = max(0, min(e1, e2) - max(s1, s2))
        union = max(e1, e2) - min(s1, s2)
        ious.append(inter / union if union > 0 else 0.0)

    return ScoreMetrics(
        stroke_count_match=count_match,
        skeleton_rmse_px=float(np.sqrt(np.mean(sq_err))) if sq_err else float("inf"),
        speed_corr=_pearson(np.asarray(speed_pairs_a), np.asarray(speed_pairs_b)),
        rotation_mae_deg=float(np.mean(rot_err)) if rot_err else float("inf"),
        contact_iou=float(np.mean(ious)) if ious else 0.0,
    )
