/** Monotone value-to-color mapping for the heatmap. */

export interface Rgb {
  r: number;
  g: number;
  b: number;
}

/** Dark-blue to white ramp; t in [0, 1]. */
export function rampColor(t: number): Rgb {
  const clamped = Math.min(1, Math.max(0, t));
  return {
    r: Math.round(30 + 225 * clamped),
    g: Math.round(45 + 210 * clamped),
    b: Math.round(90 + 165 * clamped),
  };
}

export function cssColor(c: Rgb): string {
  return `rgb(${c.r},${c.g},${c.b})`;
}

export function normalize(values: number[]): number[] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi > lo)) return values.map(() => 0);
  return values.map((v) => (v - lo) / (hi - lo));
}
