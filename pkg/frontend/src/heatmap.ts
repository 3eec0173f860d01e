/** Spatial heatmap of one field slice with a highlight overlay. */

import type { SlicePayload } from "./api.js";
import { cssColor, normalize, rampColor } from "./colormap.js";
import { cellKey } from "./linking.js";

export class Heatmap {
  private ctx: CanvasRenderingContext2D;
  private slice: SlicePayload | null = null;
  private highlights: Set<string> = new Set();
  private zIndex = 0;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  setSlice(slice: SlicePayload): void {
    this.slice = slice;
    this.zIndex = slice.z;
    this.render();
  }

  setHighlights(cells: Set<string>): void {
    this.highlights = cells;
    this.render();
  }

  render(): void {
    if (!this.slice) return;
    const [nx, ny] = this.slice.dims;
    const { width, height } = this.canvas;
    const cw = width / nx;
    const ch = height / ny;
    const ctx = this.ctx;
    ctx.clearRect(0, 0, width, height);
    const shades = normalize(this.slice.values);
    for (let y = 0; y < ny; y++) {
      for (let x = 0; x < nx; x++) {
        ctx.fillStyle = cssColor(rampColor(shades[y * nx + x]));
        ctx.fillRect(x * cw, y * ch, Math.ceil(cw), Math.ceil(ch));
      }
    }
    ctx.fillStyle = "rgba(250, 210, 40, 0.55)";
    ctx.strokeStyle = "rgba(160, 120, 0, 0.9)";
    for (let y = 0; y < ny; y++) {
      for (let x = 0; x < nx; x++) {
        if (this.highlights.has(cellKey(x, y, this.zIndex))) {
          ctx.fillRect(x * cw, y * ch, Math.ceil(cw), Math.ceil(ch));
        }
      }
    }
  }
}

/** Clamp a requested slice index into range, reporting whether it changed. */
export function clampZ(z: number, depth: number): { z: number; clamped: boolean } {
  if (Number.isNaN(z)) return { z: 0, clamped: true };
  const bounded = Math.min(Math.max(Math.round(z), 0), depth - 1);
  return { z: bounded, clamped: bounded !== z };
}
