"""Central-axis extraction from per-frame ink increments.

Each qualifying frame contributes the centroid of its new ink; undersized or
far-jumping increments are treated as occlusion artifacts, skipped, and their
timestamps re-filled by linear interpolation between accepted neighbours so
the time base stays intact for sensor alignment. A centered moving average
smooths the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyStroke


@dataclass(frozen=True)
class SkeletonConfig:
    min_increment_px: int = 4
    max_jump_px: float = 40.0
    smooth_window: int = 3


@dataclass(frozen=True)
class RawSkeleton:
    xy: np.ndarray  # (n, 2) float64, canvas coordinates
    t_ms: np.ndarray  # (n,) int64, strictly increasing
    n_pixels: np.ndarray  # (n,) int64; 0 for interpolated points

    def __len__(self) -> int:
        return self.t_ms.shape[0]


def _smooth(xy: np.ndarray, window: int) -> np.ndarray:
    if window <= 1 or xy.shape[0] <= 2:
        return xy
    k = window // 2
    n = xy.shape[0]
    out = np.empty_like(xy)
    for i in range(n):
        # symmetric shrink keeps endpoints exact and avoids inward bias
        hw = min(k, i, n - 1 - i)
        out[i] = xy[i - hw:i + hw + 1].mean(axis=0)
    return out


def extract_skeleton(
    frames: list[tuple[int, np.ndarray]], cfg: SkeletonConfig
) -> RawSkeleton:
    """Build the stroke's central axis from (t_ms, (k, 2) pixel) increments.

    Centroids use pixel centers (+0.5). Frames below min_increment_px and
    centroids jumping more than max_jump_px from the last accepted one are
    skipped; their times are filled by interpolation when they fall between
    accepted neighbours.
    """
    frames = sorted(frames, key=lambda f: f[0])
    accepted: list[tuple[int, float, float, int]] = []
    skipped_times: list[int] = []
    for t_ms, px in frames:
        count = int(px.shape[0])
        if count < cfg.min_increment_px:
            skipped_times.append(t_ms)
            continue
        cx = float(px[:, 0].mean()) + 0.5
        cy = float(px[:, 1].mean()) + 0.5
        if accepted:
            _, lx, ly, _ = accepted[-1]
            if np.hypot(cx - lx, cy - ly) > cfg.max_jump_px:
                skipped_times.append(t_ms)
                continue
        accepted.append((t_ms, cx, cy, count))
    if not accepted:
        raise EmptyStroke(
            f"no frame with >= {cfg.min_increment_px} increment pixels"
        )

    acc_t = np.asarray([a[0] for a in accepted], dtype=np.int64)
    acc_xy = np.asarray([[a[1], a[2]] for a in accepted])
    acc_n = np.asarray([a[3] for a in accepted], dtype=np.int64)

    fill_t = [t for t in skipped_times if acc_t[0] < t < acc_t[-1]]
    if fill_t:
        fill_t_arr = np.asarray(sorted(fill_t), dtype=np.int64)
        fx = np.interp(fill_t_arr, acc_t, acc_xy[:, 0])
        fy = np.interp(fill_t_arr, acc_t, acc_xy[:, 1])
        t_all = np.concatenate([acc_t, fill_t_arr])
        xy_all = np.concatenate([acc_xy, np.stack([fx, fy], axis=1)])
        n_all = np.concatenate([acc_n, np.zeros(len(fill_t), dtype=np.int64)])
        order = np.argsort(t_all, kind="stable")
        t_all, xy_all, n_all = t_all[order], xy_all[order], n_all[order]
    else:
        t_all, xy_all, n_all = acc_t, acc_xy, acc_n

    xy_all = _smooth(xy_all, cfg.smooth_window)
    return RawSkeleton(xy=xy_all, t_ms=t_all, n_pixels=n_all)


def compute_speed(sk: RawSkeleton) -> np.ndarray:
    """Point speed in px/s from centroid offsets; speed[0] copies speed[1]."""
    n = len(sk)
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.zeros(1)
    d = np.hypot(np.diff(sk.xy[:, 0]), np.diff(sk.xy[:, 1]))
    dt_s = np.diff(sk.t_ms) / 1000.0
    speeds = np.empty(n)
    speeds[1:] = d / dt_s
    speeds[0] = speeds[1]
    return speeds


def arc_length_positions(sk: RawSkeleton) -> tuple[np.ndarray, bool]:
    """Normalized cumulative chord length in [0, 1]; (positions, degenerate)."""
    n = len(sk)
    if n == 0:
        return np.zeros(0), True
    if n == 1:
        return np.zeros(1), False
    d = np.hypot(np.diff(sk.xy[:, 0]), np.diff(sk.xy[:, 1]))
    cum = np.concatenate([[0.0], np.cumsum(d)])
    total = cum[-1]
    if total == 0.0:
        return np.zeros(n), True
    pos = cum / total
    pos[-1] = 1.0
    return pos, False
