"""Pen-down detection, pixel timestamping, and stroke grouping.

Contact detection runs a hysteresis state machine over the tip-gap trace
(a raw threshold chatters on noisy traces). Pixels are timestamped by first
appearance across the mask sequence, then partitioned into strokes by the
contact intervals, with a slack window after each interval for ink that
surfaces late (occlusion reveal).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyTrace, NoContacts
from .ingest import InkMask, TipTrace
from .model import ContactInterval


@dataclass(frozen=True)
class ContactConfig:
    t_low_px: float = 4.0
    t_high_px: float = 9.0
    min_down_ms: int = 60
    min_up_ms: int = 60


@dataclass(frozen=True)
class TimedPixelMap:
    """First-appearance time per pixel; -1 where no mask ever had ink."""

    stamp_ms: np.ndarray  # (h, w) int64

    def positions_times(self) -> tuple[np.ndarray, np.ndarray]:
        """All inked pixels as ((n, 2) x,y int64, (n,) t_ms int64)."""
        ys, xs = np.nonzero(self.stamp_ms >= 0)
        return np.stack([xs, ys], axis=1).astype(np.int64), self.stamp_ms[ys, xs]

    @property
    def ink_count(self) -> int:
        return int((self.stamp_ms >= 0).sum())


@dataclass(frozen=True)
class StrokeGrouping:
    # pixel rows are (x, y, t_ms); one array per contact interval, time-sorted
    stroke_pixels: tuple[np.ndarray, ...]
    discarded: int


def detect_contacts(trace: TipTrace, cfg: ContactConfig) -> list[ContactInterval]:
    """Hysteresis pen-down detection.

    Enter contact when the gap stays below t_low for at least min_down_ms of
    consecutive samples; leave when it stays above t_high for min_up_ms. The
    interval spans from the first low sample to the first sample of the
    confirming up-run (trace end closes an open interval).
    """
    if len(trace) == 0:
        raise EmptyTrace("tip trace has no samples")
    t = trace.t_ms
    gap = trace.gap_px

    intervals: list[ContactInterval] = []
    down = False
    run_start = -1  # index of the first sample of the current candidate run
    start_ms = 0
    for i in range(t.shape[0]):
        if not down:
            if gap[i] < cfg.t_low_px:
                if run_start < 0:
                    run_start = i
                if t[i] - t[run_start] >= cfg.min_down_ms:
                    down = True
                    start_ms = int(t[run_start])
                    run_start = -1
            else:
                run_start = -1
        else:
            if gap[i] > cfg.t_high_px:
                if run_start < 0:
                    run_start = i
                if t[i] - t[run_start] >= cfg.min_up_ms:
                    down = False
                    end_ms = int(t[run_start])
                    intervals.append(ContactInterval(start_ms, end_ms, len(intervals)))
                    run_start = -1
            else:
                run_start = -1
    if down:
        end_ms = int(t[-1])
        if end_ms > start_ms:
            intervals.append(ContactInterval(start_ms, end_ms, len(intervals)))

    kept = [iv for iv in intervals if iv.end_ms - iv.start_ms >= cfg.min_down_ms]
    return [ContactInterval(iv.start_ms, iv.end_ms, i) for i, iv in enumerate(kept)]


def timestamp_pixels(masks: list[InkMask]) -> TimedPixelMap:
    """First-appearance timestamp per pixel; later disappearance is ignored."""
    if not masks:
        raise DimensionMismatch("no masks to timestamp")
    shape = masks[0].bits.shape
    stamp = np.full(shape, -1, dtype=np.int64)
    for mask in masks:
        if mask.bits.shape != shape:
            raise DimensionMismatch(
                f"mask at t={mask.t_ms} is {mask.bits.shape}, expected {shape}"
            )
        fresh = mask.bits & (stamp < 0)
        stamp[fresh] = mask.t_ms
    return TimedPixelMap(stamp_ms=stamp)


def ink_increment(prev: InkMask, cur: InkMask) -> np.ndarray:
    """Pixels ink in cur but not prev, as (n, 2) x,y. Removals are never reported."""
    if prev.bits.shape != cur.bits.shape:
        raise DimensionMismatch(f"mask shapes differ: {prev.bits.shape} vs {cur.bits.shape}")
    ys, xs = np.nonzero(cur.bits & ~prev.bits)
    return np.stack([xs, ys], axis=1).astype(np.int64)


def group_strokes(
    pixels: TimedPixelMap, contacts: list[ContactInterval], slack_ms: int
) -> StrokeGrouping:
    """Assign each timestamped pixel to a contact interval.

    A pixel inside interval i belongs to stroke i; a pixel in the pen-up gap
    within slack_ms after interval i's end is rescued into stroke i; anything
    else is discarded and counted.
    """
    if not contacts:
        raise NoContacts("no contact intervals to group by")
    pos, t = pixels.positions_times()
    starts = np.asarray([c.start_ms for c in contacts], dtype=np.int64)
    ends = np.asarray([c.end_ms for c in contacts], dtype=np.int64)

    idx = np.searchsorted(starts, t, side="right") - 1
    in_range = idx >= 0
    safe_idx = np.clip(idx, 0, len(contacts) - 1)
    inside = in_range & (t <= ends[safe_idx])
    slack = in_range & ~inside & (t <= ends[safe_idx] + slack_ms)
    assigned = inside | slack

    stroke_pixels = []
    for i in range(len(contacts)):
        sel = assigned & (safe_idx == i)
        rows = np.concatenate([pos[sel], t[sel, None]], axis=1)
        rows = rows[np.lexsort((rows[:, 1], rows[:, 0], rows[:, 2]))]
        stroke_pixels.append(rows)
    return StrokeGrouping(
        stroke_pixels=tuple(stroke_pixels), discarded=int((~assigned).sum())
    )
