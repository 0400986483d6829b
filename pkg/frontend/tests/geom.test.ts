import { describe, expect, it } from "vitest";

import {
  displayAnchorDeg,
  formBoundaryLines,
  frameIndexForTime,
  mizigeLines,
  nearestIndexByArc,
  nearestIndexByTime,
  sessionDurationMs,
  snapToSample,
  structuralBoundaryPath,
  subsampleIndices,
} from "../src/geom.js";
import teacher from "./fixtures/session_teacher.json";
import type { SessionDoc, SkeletonPoint } from "../src/types.js";

const session = teacher as unknown as SessionDoc;

describe("mizige grid", () => {
  it("has the 8 directions: border, diagonals, center cross", () => {
    const lines = mizigeLines(100);
    expect(lines).toHaveLength(8);
    expect(lines).toContainEqual({ x1: 0, y1: 0, x2: 100, y2: 100 });
    expect(lines).toContainEqual({ x1: 50, y1: 0, x2: 50, y2: 100 });
  });
});

describe("boundaries", () => {
  const box = {
    top: { x: 40, y: 10 },
    bottom: { x: 55, y: 90 },
    left: { x: 5, y: 30 },
    right: { x: 95, y: 60 },
    rect: { x0: 5, y0: 10, x1: 95, y1: 90 },
  };

  it("structural boundary connects the four extremities", () => {
    const d = structuralBoundaryPath(box);
    expect(d).toBe("M 40 10 L 95 60 L 55 90 L 5 30 Z");
  });

  it("form boundary is the rect plus center lines", () => {
    const lines = formBoundaryLines(box);
    expect(lines).toHaveLength(6);
    expect(lines).toContainEqual({ x1: 50, y1: 10, x2: 50, y2: 90 });
    expect(lines).toContainEqual({ x1: 5, y1: 50, x2: 95, y2: 50 });
  });
});

describe("hover linking", () => {
  const points = session.strokes[0].skeleton;

  it("snaps hover positions to the nearest resampled position", () => {
    const { index, pos } = snapToSample(0.403, 100);
    expect(index).toBe(40);
    expect(pos).toBeCloseTo(40 / 99, 12);
  });

  it("finds the skeleton point within one resample cell of any sampled position", () => {
    const n = 100;
    const cell = 1 / (n - 1);
    for (let k = 0; k < n; k++) {
      const hover = k / (n - 1);
      const idx = nearestIndexByArc(points, hover);
      // nearest by construction: no other point is closer
      for (const p of points) {
        expect(Math.abs(points[idx].arc_pos - hover)).toBeLessThanOrEqual(
          Math.abs(p.arc_pos - hover) + 1e-12,
        );
      }
      // skeleton sampling is denser than the chart grid here, so the
      // linked point sits within one resample cell of the hover position
      expect(Math.abs(points[idx].arc_pos - hover)).toBeLessThanOrEqual(cell + 0.02);
    }
  });
});

describe("timeline mapping", () => {
  it("maps t=0 to the first frame and t=end to the last", () => {
    const duration = sessionDurationMs(session.strokes);
    expect(duration).toBeGreaterThan(0);
    expect(frameIndexForTime(0, duration, session.frame_count)).toBe(0);
    expect(frameIndexForTime(duration, duration, session.frame_count)).toBe(
      session.frame_count - 1,
    );
  });

  it("clamps out-of-range times", () => {
    expect(frameIndexForTime(-50, 1000, 30)).toBe(0);
    expect(frameIndexForTime(99999, 1000, 30)).toBe(29);
  });

  it("nearest-by-time picks exact sample hits", () => {
    const pts = session.strokes[0].skeleton;
    const idx = Math.floor(pts.length / 2);
    expect(nearestIndexByTime(pts, pts[idx].t_ms)).toBe(idx);
  });
});

describe("arrow layout", () => {
  it("subsamples to at most 20 arrows and keeps the first point", () => {
    for (const n of [3, 19, 20, 21, 45, 200]) {
      const idx = subsampleIndices(n, 20);
      expect(idx.length).toBeLessThanOrEqual(20);
      expect(idx[0]).toBe(0);
      expect(new Set(idx).size).toBe(idx.length);
    }
  });

  it("anchors arrows to the reverse of the opening advance", () => {
    const rightward: SkeletonPoint[] = [0, 1, 2].map((i) => ({
      x: 10 + 5 * i, y: 40, t_ms: i * 33, speed_px_s: 1, pressure_raw: 1,
      pressure_tier: 0, speed_tier: 0, tilt: { dx: 0, dy: 0 },
      rotation_deg: 0, arc_pos: i / 2,
    }));
    const stroke = { index: 0, contact: { start_ms: 0, end_ms: 66 }, skeleton: rightward, pixel_count: 1 };
    expect(displayAnchorDeg(stroke)).toBeCloseTo(180, 9);
  });
});
