/** Display geometry: grids, linking math, and arrow/segment layout.
 *
 * Everything here is presentation-level; pipeline quantities (tiers, arcs,
 * rotations, boxes) arrive precomputed in the API payloads. The one
 * deliberate exception besides tier colors is the rotation-arrow anchor,
 * which is display-only and recomputed from the first stroke's opening
 * advance direction.
 */

import type { BoxDoc, SkeletonPoint, StrokeDoc } from "./types.js";

export interface Line {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

/** The 8-direction practice grid over a square cell. */
export function mizigeLines(size: number): Line[] {
  const s = size;
  return [
    { x1: 0, y1: 0, x2: s, y2: 0 },
    { x1: s, y1: 0, x2: s, y2: s },
    { x1: s, y1: s, x2: 0, y2: s },
    { x1: 0, y1: s, x2: 0, y2: 0 },
    { x1: 0, y1: 0, x2: s, y2: s },
    { x1: s, y1: 0, x2: 0, y2: s },
    { x1: s / 2, y1: 0, x2: s / 2, y2: s },
    { x1: 0, y1: s / 2, x2: s, y2: s / 2 },
  ];
}

/** Quad through the four extremity pixels ("Structural Boundary"). */
export function structuralBoundaryPath(box: BoxDoc): string {
  return (
    `M ${box.top.x} ${box.top.y} L ${box.right.x} ${box.right.y} ` +
    `L ${box.bottom.x} ${box.bottom.y} L ${box.left.x} ${box.left.y} Z`
  );
}

/** Axis-aligned rect with center lines ("Form Boundary"). */
export function formBoundaryLines(box: BoxDoc): Line[] {
  const { x0, y0, x1, y1 } = box.rect;
  const mx = (x0 + x1) / 2;
  const my = (y0 + y1) / 2;
  return [
    { x1: x0, y1: y0, x2: x1, y2: y0 },
    { x1: x1, y1: y0, x2: x1, y2: y1 },
    { x1: x1, y1: y1, x2: x0, y2: y1 },
    { x1: x0, y1: y1, x2: x0, y2: y0 },
    { x1: mx, y1: y0, x2: mx, y2: y1 },
    { x1: x0, y1: my, x2: x1, y2: my },
  ];
}

export function nearestIndexByArc(points: SkeletonPoint[], arc: number): number {
  let best = 0;
  let bestDist = Infinity;
  for (let i = 0; i < points.length; i++) {
    const d = Math.abs(points[i].arc_pos - arc);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  }
  return best;
}

export function nearestIndexByTime(points: SkeletonPoint[], tMs: number): number {
  let best = 0;
  let bestDist = Infinity;
  for (let i = 0; i < points.length; i++) {
    const d = Math.abs(points[i].t_ms - tMs);
    if (d < bestDist) {
      bestDist = d;
      best = i;
    }
  }
  return best;
}

/** Chart x (a resampled curve position in [0,1]) of the sample nearest to a hover. */
export function snapToSample(hoverPos: number, nSamples: number): { index: number; pos: number } {
  const clamped = Math.min(Math.max(hoverPos, 0), 1);
  const index = Math.round(clamped * (nSamples - 1));
  return { index, pos: index / (nSamples - 1) };
}

/** Timeline time -> retained-frame index, proportional over the writing span. */
export function frameIndexForTime(tMs: number, durationMs: number, frameCount: number): number {
  if (frameCount <= 1 || durationMs <= 0) return 0;
  const u = Math.min(Math.max(tMs / durationMs, 0), 1);
  return Math.round(u * (frameCount - 1));
}

export function sessionDurationMs(strokes: StrokeDoc[]): number {
  let end = 0;
  for (const s of strokes) end = Math.max(end, s.contact.end_ms);
  return end;
}

/** Indices of at most maxCount evenly stepped points (always includes the first). */
export function subsampleIndices(n: number, maxCount: number): number[] {
  if (n <= maxCount) return Array.from({ length: n }, (_, i) => i);
  const step = Math.ceil(n / maxCount);
  const out: number[] = [];
  for (let i = 0; i < n; i += step) out.push(i);
  return out;
}

/** Arrow zero direction: reverse of the first stroke's opening advance. */
export function displayAnchorDeg(firstStroke: StrokeDoc, refWindowPoints = 3): number {
  const pts = firstStroke.skeleton;
  if (pts.length < 2) return 180;
  const m = Math.min(refWindowPoints, pts.length);
  const dx = pts[m - 1].x - pts[0].x;
  const dy = pts[m - 1].y - pts[0].y;
  // +0 keeps atan2 off the negative-zero branch so a flat reverse is +180
  return (Math.atan2(-dy + 0, -dx + 0) * 180) / Math.PI;
}

/** Tilt projection segment endpoint; |tilt| = 1 maps to maxLen pixels. */
export function tiltSegment(
  p: SkeletonPoint,
  maxLen: number,
): Line {
  return { x1: p.x, y1: p.y, x2: p.x + p.tilt.dx * maxLen, y2: p.y + p.tilt.dy * maxLen };
}
