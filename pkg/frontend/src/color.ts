/** Tier-to-color mapping: the one piece of pipeline math the client re-derives. */

// 5-tier sequential ramps, light to dark.
export const PRESSURE_RAMP = ["#fee5d9", "#fcae91", "#fb6a4a", "#de2d26", "#a50f15"];
export const SPEED_RAMP = ["#eff3ff", "#bdd7e7", "#6baed6", "#3182bd", "#08519c"];

export function tierColor(tier: number, ramp: string[]): string {
  const k = Math.min(Math.max(tier, 0), ramp.length - 1);
  return ramp[k];
}

/** Sequence-order encoding for progress rows: saturation grows along the row. */
export function saturationColor(hueDeg: number, index: number, count: number): string {
  const u = count <= 1 ? 1 : index / (count - 1);
  const sat = Math.round(15 + 80 * u);
  return `hsl(${hueDeg}, ${sat}%, 45%)`;
}
