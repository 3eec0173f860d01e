/** Line plot of the linearized series with zoom, pan, brushing, and bands. */

import type { Bands } from "./api.js";
import { BrushSet } from "./linking.js";

export interface ViewRange {
  lo: number;
  hi: number;
}

/** Pure axis-window state: zooming and panning never mutate the data. */
export class AxisWindow {
  constructor(
    public lo: number,
    public hi: number,
    private min: number,
    private max: number,
  ) {}

  static full(count: number): AxisWindow {
    return new AxisWindow(0, Math.max(count - 1, 1), 0, Math.max(count - 1, 1));
  }

  span(): number {
    return this.hi - this.lo;
  }

  clamp(): void {
    const span = Math.min(this.span(), this.max - this.min);
    if (this.lo < this.min) {
      this.lo = this.min;
      this.hi = this.min + span;
    }
    if (this.hi > this.max) {
      this.hi = this.max;
      this.lo = this.max - span;
    }
  }

  zoom(factor: number, center: number): void {
    const span = Math.max(this.span() * factor, 2);
    const frac = this.span() > 0 ? (center - this.lo) / this.span() : 0.5;
    this.lo = center - frac * span;
    this.hi = this.lo + span;
    this.clamp();
  }

  pan(deltaRanks: number): void {
    this.lo += deltaRanks;
    this.hi += deltaRanks;
    this.clamp();
  }

  set(lo: number, hi: number): void {
    this.lo = Math.min(lo, hi);
    this.hi = Math.max(lo, hi);
    this.clamp();
  }
}

export interface LinePlotOptions {
  onBrushChange: () => void;
}

export class LinePlot {
  readonly brushes = new BrushSet();
  readonly window: AxisWindow;
  private ctx: CanvasRenderingContext2D;
  private dragStart: number | null = null;
  private dragCurrent: number | null = null;
  private panning = false;
  private panLast = 0;

  constructor(
    private canvas: HTMLCanvasElement,
    private values: number[],
    private bands: Bands | null,
    private options: LinePlotOptions,
  ) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
    this.window = AxisWindow.full(values.length);
    this.bindEvents();
    this.render();
  }

  rankAt(pixelX: number): number {
    const frac = pixelX / this.canvas.width;
    return this.window.lo + frac * this.window.span();
  }

  private pixelOf(rank: number): number {
    return ((rank - this.window.lo) / Math.max(this.window.span(), 1e-9)) * this.canvas.width;
  }

  private bindEvents(): void {
    this.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const factor = ev.deltaY > 0 ? 1.25 : 0.8;
      this.window.zoom(factor, this.rankAt(ev.offsetX));
      this.render();
    });
    this.canvas.addEventListener("mousedown", (ev) => {
      if (ev.shiftKey) {
        this.panning = true;
        this.panLast = ev.offsetX;
      } else {
        this.dragStart = ev.offsetX;
        this.dragCurrent = ev.offsetX;
      }
    });
    this.canvas.addEventListener("mousemove", (ev) => {
      if (this.panning) {
        const deltaPx = ev.offsetX - this.panLast;
        this.panLast = ev.offsetX;
        this.window.pan((-deltaPx / this.canvas.width) * this.window.span());
        this.render();
      } else if (this.dragStart !== null) {
        this.dragCurrent = ev.offsetX;
        this.render();
      }
    });
    const finish = (ev: MouseEvent) => {
      if (this.panning) {
        this.panning = false;
        return;
      }
      if (this.dragStart === null) return;
      const a = this.rankAt(this.dragStart);
      const b = this.rankAt(ev.offsetX);
      this.dragStart = null;
      this.dragCurrent = null;
      if (Math.abs(a - b) < 0.5) {
        const hit = this.brushes.hit(Math.round(a));
        if (hit !== null) this.brushes.remove(hit);
      } else {
        this.brushes.add({ lo: a, hi: b });
      }
      this.render();
      this.options.onBrushChange();
    };
    this.canvas.addEventListener("mouseup", finish);
    this.canvas.addEventListener("dblclick", () => {
      this.brushes.clear();
      this.render();
      this.options.onBrushChange();
    });
  }

  render(): void {
    const { width, height } = this.canvas;
    const ctx = this.ctx;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#ffffff";
    ctx.fillRect(0, 0, width, height);
    const visible = this.values.filter(
      (_, i) => i >= Math.floor(this.window.lo) && i <= Math.ceil(this.window.hi),
    );
    const series = this.bands ? this.bands.max.concat(this.bands.min) : visible;
    let lo = Math.min(...series);
    let hi = Math.max(...series);
    if (!(hi > lo)) {
      lo -= 1;
      hi += 1;
    }
    const yOf = (v: number) => height - ((v - lo) / (hi - lo)) * (height - 20) - 10;

    if (this.bands) {
      this.fillBand(this.bands.min, this.bands.max, "#dce8f5", yOf);
      this.fillBand(this.bands.q25, this.bands.q75, "#aecbe8", yOf);
      this.strokeSeries(this.bands.median, "#1f5fa8", yOf);
    } else {
      this.strokeSeries(this.values, "#1f5fa8", yOf);
    }

    ctx.fillStyle = "rgba(240, 180, 40, 0.35)";
    for (const b of this.brushes.intervals()) {
      const x0 = this.pixelOf(Math.min(b.lo, b.hi));
      const x1 = this.pixelOf(Math.max(b.lo, b.hi));
      ctx.fillRect(x0, 0, Math.max(x1 - x0, 1), height);
    }
    if (this.dragStart !== null && this.dragCurrent !== null) {
      ctx.fillStyle = "rgba(240, 180, 40, 0.2)";
      const x0 = Math.min(this.dragStart, this.dragCurrent);
      const x1 = Math.max(this.dragStart, this.dragCurrent);
      ctx.fillRect(x0, 0, Math.max(x1 - x0, 1), height);
    }

    ctx.fillStyle = "#333";
    ctx.font = "11px sans-serif";
    ctx.fillText(`ranks ${Math.round(this.window.lo)}..${Math.round(this.window.hi)}`, 6, 12);
  }

  private strokeSeries(series: number[], color: string, yOf: (v: number) => number): void {
    const ctx = this.ctx;
    ctx.strokeStyle = color;
    ctx.lineWidth = 1.2;
    ctx.beginPath();
    let started = false;
    for (let i = 0; i < series.length; i++) {
      const x = this.pixelOf(i);
      if (x < -2 || x > this.canvas.width + 2) continue;
      const y = yOf(series[i]);
      if (started) ctx.lineTo(x, y);
      else {
        ctx.moveTo(x, y);
        started = true;
      }
    }
    ctx.stroke();
  }

  private fillBand(
    low: number[],
    high: number[],
    color: string,
    yOf: (v: number) => number,
  ): void {
    const ctx = this.ctx;
    ctx.fillStyle = color;
    ctx.beginPath();
    for (let i = 0; i < high.length; i++) {
      const x = this.pixelOf(i);
      const y = yOf(high[i]);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    for (let i = low.length - 1; i >= 0; i--) {
      ctx.lineTo(this.pixelOf(i), yOf(low[i]));
    }
    ctx.closePath();
    ctx.fill();
  }
}
