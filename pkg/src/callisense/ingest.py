"""Input reading and rectification.

Frames arrive as binary PGM (P5), are rectified to the top-down canvas with
a homography computed from the manifest's paper quad, and binarized into ink
masks. Sensor and tip-gap streams are parsed from CSV and shifted onto the
unified session clock (frame 0 = clock origin) by their manifest offsets.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadCsvRow, DegenerateQuad, InputError, MissingFile, NonMonotoneTime
from .kernels import warp_bilinear
from .model import normalize_deg

log = logging.getLogger(__name__)

# Samples further than this from the frame span are dropped on load.
CLOCK_WINDOW_MS = 500

SENSOR_HEADER = ["t_ms", "yaw_deg", "pitch_deg", "roll_deg", "pressure_raw"]
TIP_HEADER = ["t_ms", "gap_px"]


@dataclass(frozen=True)
class FrameManifest:
    frame_files: tuple[Path, ...]
    frame_times_ms: tuple[int, ...]
    paper_quad: np.ndarray  # (4, 2) float64, clockwise from top-left
    dst_w: int
    dst_h: int
    sensor_log: Path
    tip_trace: Path
    sensor_clock_offset_ms: int
    tip_clock_offset_ms: int


@dataclass(frozen=True)
class InkMask:
    bits: np.ndarray  # (h, w) bool, True = ink
    t_ms: int

    @property
    def w(self) -> int:
        return self.bits.shape[1]

    @property
    def h(self) -> int:
        return self.bits.shape[0]


@dataclass(frozen=True)
class SensorStream:
    """Columnar sensor log; yaw is normalized to (-180, 180] on load."""

    t_ms: np.ndarray  # int64
    yaw_deg: np.ndarray  # float64
    pitch_deg: np.ndarray
    roll_deg: np.ndarray
    pressure_raw: np.ndarray  # int64

    def __len__(self) -> int:
        return self.t_ms.shape[0]


@dataclass(frozen=True)
class TipTrace:
    t_ms: np.ndarray  # int64
    gap_px: np.ndarray  # float64

    def __len__(self) -> int:
        return self.t_ms.shape[0]


@dataclass(frozen=True)
class LoadReport:
    dropped_sensor_samples: int
    dropped_tip_samples: int


# ---------------------------------------------------------------------------
# PGM I/O


def read_pgm(path: str | Path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"frame file not found: {path}")
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise InputError(f"not a binary PGM (P5): {path}")
    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # with '#' comments allowed between them.
    tokens: list[bytes] = []
    i = 2
    while len(tokens) < 3:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if i < len(data) and data[i:i + 1] == b"#":
            while i < len(data) and data[i:i + 1] != b"\n":
                i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        if j == i:
            raise InputError(f"truncated PGM header: {path}")
        tokens.append(data[i:j])
        i = j
    i += 1  # single whitespace after maxval
    try:
        w, h, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise InputError(f"bad PGM header in {path}") from exc
    if maxval != 255:
        raise InputError(f"only 8-bit PGM supported (maxval 255), got {maxval}: {path}")
    pixels = np.frombuffer(data, dtype=np.uint8, offset=i, count=w * h)
    if pixels.size != w * h:
        raise InputError(f"PGM pixel data truncated: {path}")
    return pixels.reshape(h, w).copy()


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(img.tobytes())


# ---------------------------------------------------------------------------
# Geometry


def _check_quad(quad: np.ndarray, name: str) -> None:
    for a in range(4):
        for b in range(a + 1, 4):
            if np.allclose(quad[a], quad[b], atol=1e-9):
                raise DegenerateQuad(f"{name}: corners {a} and {b} coincide")
    for skip in range(4):
        pts = np.delete(quad, skip, axis=0)
        cross = (pts[1, 0] - pts[0, 0]) * (pts[2, 1] - pts[0, 1]) - (
            pts[1, 1] - pts[0, 1]
        ) * (pts[2, 0] - pts[0, 0])
        if abs(cross) < 1e-9:
            raise DegenerateQuad(f"{name}: three corners are collinear")


def compute_homography(src_quad, dst_quad) -> np.ndarray:
    """3x3 matrix mapping src corners to dst corners, normalized to m[2][2] = 1.

    Solved as the standard 8-unknown direct linear system over the four
    correspondences.
    """
    src = np.asarray(src_quad, dtype=np.float64).reshape(4, 2)
    dst = np.asarray(dst_quad, dtype=np.float64).reshape(4, 2)
    _check_quad(src, "source quad")
    _check_quad(dst, "destination quad")

    a = np.zeros((8, 8))
    b = np.zeros(8)
    for k in range(4):
        x, y = src[k]
        u, v = dst[k]
        a[2 * k] = [x, y, 1, 0, 0, 0, -u * x, -u * y]
        a[2 * k + 1] = [0, 0, 0, x, y, 1, -v * x, -v * y]
        b[2 * k] = u
        b[2 * k + 1] = v
    try:
        h = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateQuad(f"homography system is singular: {exc}") from exc
    m = np.append(h, 1.0).reshape(3, 3)
    if abs(np.linalg.det(m)) < 1e-12:
        raise DegenerateQuad("homography is not invertible")
    return m


def dst_rect_corners(w: int, h: int) -> np.ndarray:
    """Destination rectangle corners, clockwise from top-left."""
    return np.array([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]])


def correct_perspective(frame: np.ndarray, h: np.ndarray, dst_size: tuple[int, int]) -> np.ndarray:
    """Rectify a grayscale frame to the top-down canvas (bilinear, white fill)."""
    w, ht = dst_size
    hinv = np.linalg.inv(np.asarray(h, dtype=np.float64))
    return warp_bilinear(frame, hinv, int(w), int(ht))


def binarize(frame: np.ndarray, ink_threshold: int, t_ms: int = 0) -> InkMask:
    """Ink is dark on light paper: a bit is set iff pixel value < threshold."""
    return InkMask(bits=frame < ink_threshold, t_ms=t_ms)


# ---------------------------------------------------------------------------
# Manifest and CSV parsing


def load_manifest(path: str | Path) -> FrameManifest:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest is not valid JSON: {path}: {exc}") from exc
    base = path.parent
    try:
        frames = doc["frames"]
        quad = np.asarray(doc["paper_quad"], dtype=np.float64).reshape(4, 2)
        dst = doc["dst_size"]
        manifest = FrameManifest(
            frame_files=tuple(base / f["file"] for f in frames),
            frame_times_ms=tuple(int(f["t_ms"]) for f in frames),
            paper_quad=quad,
            dst_w=int(dst["w"]),
            dst_h=int(dst["h"]),
            sensor_log=base / doc["sensor_log"],
            tip_trace=base / doc["tip_trace"],
            sensor_clock_offset_ms=int(doc.get("sensor_clock_offset_ms", 0)),
            tip_clock_offset_ms=int(doc.get("tip_clock_offset_ms", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed manifest {path}: {exc}") from exc
    if not manifest.frame_files:
        raise InputError(f"manifest lists no frames: {path}")
    times = np.asarray(manifest.frame_times_ms)
    if not np.all(np.diff(times) > 0):
        raise NonMonotoneTime(f"frame times must be strictly increasing: {path}")
    if manifest.dst_w <= 0 or manifest.dst_h <= 0:
        raise InputError(f"dst_size must be positive: {path}")
    _check_quad(manifest.paper_quad, "paper_quad")
    return manifest


def _read_csv_rows(path: Path, header: list[str]):
    if not path.is_file():
        raise MissingFile(f"csv file not found: {path}")
    with open(path, "r", encoding="utf-8", newline="") as f:
        first = f.readline().strip()
        if first.split(",") != header:
            raise BadCsvRow(path, 1, f"expected header {','.join(header)!r}, got {first!r}")
        for line_no, line in enumerate(f, start=2):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise BadCsvRow(path, line_no, f"expected {len(header)} columns, got {len(cells)}")
            yield line_no, cells


def load_sensor_csv(path: str | Path) -> SensorStream:
    path = Path(path)
    t, yaw, pitch, roll, pressure = [], [], [], [], []
    for line_no, cells in _read_csv_rows(path, SENSOR_HEADER):
        try:
            t_ms = int(cells[0])
            angles = [float(c) for c in cells[1:4]]
            p = int(cells[4])
        except ValueError as exc:
            raise BadCsvRow(path, line_no, f"unparseable value: {exc}") from exc
        if t_ms < 0:
            raise BadCsvRow(path, line_no, f"t_ms must be >= 0, got {t_ms}")
        if not all(np.isfinite(angles)):
            raise BadCsvRow(path, line_no, "angles must be finite")
        if not -90.0 <= angles[1] <= 90.0:
            raise BadCsvRow(path, line_no, f"pitch_deg out of [-90, 90]: {angles[1]}")
        if not 0 <= p <= 1023:
            raise BadCsvRow(path, line_no, f"pressure_raw out of [0, 1023]: {p}")
        t.append(t_ms)
        yaw.append(normalize_deg(angles[0]))
        pitch.append(angles[1])
        roll.append(angles[2])
        pressure.append(p)
    times = np.asarray(t, dtype=np.int64)
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise NonMonotoneTime(f"sensor times must be strictly increasing: {path}")
    return SensorStream(
        t_ms=times,
        yaw_deg=np.asarray(yaw),
        pitch_deg=np.asarray(pitch),
        roll_deg=np.asarray(roll),
        pressure_raw=np.asarray(pressure, dtype=np.int64),
    )


def load_tip_csv(path: str | Path) -> TipTrace:
    path = Path(path)
    t, gap = [], []
    for line_no, cells in _read_csv_rows(path, TIP_HEADER):
        try:
            t_ms = int(cells[0])
            g = float(cells[1])
        except ValueError as exc:
            raise BadCsvRow(path, line_no, f"unparseable value: {exc}") from exc
        if not np.isfinite(g) or g < 0:
            raise BadCsvRow(path, line_no, f"gap_px must be finite and >= 0, got {g}")
        t.append(t_ms)
        gap.append(g)
    times = np.asarray(t, dtype=np.int64)
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise NonMonotoneTime(f"tip-trace times must be strictly increasing: {path}")
    return TipTrace(t_ms=times, gap_px=np.asarray(gap))


def _window_mask(t: np.ndarray, lo: int, hi: int) -> np.ndarray:
    return (t >= lo) & (t <= hi)


def load_inputs(manifest: FrameManifest, ink_threshold: int = 100):
    """Read and rectify all inputs.

    Returns (masks, sensor, tip, report) with every stream on the unified
    clock. Samples outside the frame span (plus CLOCK_WINDOW_MS margin) are
    dropped and counted in the report.
    """
    hmat = compute_homography(
        manifest.paper_quad, dst_rect_corners(manifest.dst_w, manifest.dst_h)
    )
    raw_dims = None
    masks = []
    for file, t_ms in zip(manifest.frame_files, manifest.frame_times_ms):
        raw = read_pgm(file)
        if raw_dims is None:
            raw_dims = raw.shape
        elif raw.shape != raw_dims:
            # One paper_quad cannot describe mixed capture geometries.
            from .errors import DimensionMismatch

            raise DimensionMismatch(
                f"frame {file} is {raw.shape[1]}x{raw.shape[0]}, "
                f"expected {raw_dims[1]}x{raw_dims[0]}"
            )
        corrected = correct_perspective(raw, hmat, (manifest.dst_w, manifest.dst_h))
        masks.append(binarize(corrected, ink_threshold, t_ms=t_ms))

    lo = manifest.frame_times_ms[0] - CLOCK_WINDOW_MS
    hi = manifest.frame_times_ms[-1] + CLOCK_WINDOW_MS

    sensor = load_sensor_csv(manifest.sensor_log)
    t_sensor = sensor.t_ms + manifest.sensor_clock_offset_ms
    keep = _window_mask(t_sensor, lo, hi)
    dropped_sensor = int((~keep).sum())
    sensor = SensorStream(
        t_ms=t_sensor[keep],
        yaw_deg=sensor.yaw_deg[keep],
        pitch_deg=sensor.pitch_deg[keep],
        roll_deg=sensor.roll_deg[keep],
        pressure_raw=sensor.pressure_raw[keep],
    )

    tip = load_tip_csv(manifest.tip_trace)
    t_tip = tip.t_ms + manifest.tip_clock_offset_ms
    keep = _window_mask(t_tip, lo, hi)
    dropped_tip = int((~keep).sum())
    tip = TipTrace(t_ms=t_tip[keep], gap_px=tip.gap_px[keep])

    if dropped_sensor or dropped_tip:
        log.info(
            "dropped %d sensor / %d tip samples outside [%d, %d] ms",
            dropped_sensor, dropped_tip, lo, hi,
        )
    return masks, sensor, tip, LoadReport(dropped_sensor, dropped_tip)
