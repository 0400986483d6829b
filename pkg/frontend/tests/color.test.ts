import { describe, expect, it } from "vitest";

import { PRESSURE_RAMP, SPEED_RAMP, saturationColor, tierColor } from "../src/color.js";

describe("tier colors", () => {
  it("maps each tier to its ramp entry", () => {
    for (let t = 0; t < 5; t++) {
      expect(tierColor(t, PRESSURE_RAMP)).toBe(PRESSURE_RAMP[t]);
      expect(tierColor(t, SPEED_RAMP)).toBe(SPEED_RAMP[t]);
    }
  });

  it("clamps out-of-range tiers", () => {
    expect(tierColor(-1, PRESSURE_RAMP)).toBe(PRESSURE_RAMP[0]);
    expect(tierColor(99, PRESSURE_RAMP)).toBe(PRESSURE_RAMP[4]);
  });

  it("ramps are 5-tier and distinct", () => {
    expect(new Set(PRESSURE_RAMP).size).toBe(5);
    expect(new Set(SPEED_RAMP).size).toBe(5);
  });
});

describe("sequence saturation", () => {
  it("saturation grows monotonically along a row", () => {
    const sats = [0, 1, 2, 3, 4].map((i) => {
      const m = saturationColor(0, i, 5).match(/, (\d+)%/);
      return Number(m![1]);
    });
    for (let i = 1; i < sats.length; i++) expect(sats[i]).toBeGreaterThan(sats[i - 1]);
  });

  it("a single-dot row gets full saturation", () => {
    expect(saturationColor(220, 0, 1)).toContain("95%");
  });
});
