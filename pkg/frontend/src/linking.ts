/** Brushing-and-linking model: rank intervals on the curve map to spatial cells.
 *
 * Highlighted cells are exactly the cells covered by curve steps whose rank
 * falls inside a brushed interval; a coarse (multiscale) step highlights its
 * whole leaf box. Multiple brushes union without duplicates.
 */

import type { CurvePayload } from "./api.js";

export interface RankInterval {
  /** inclusive lower rank */
  lo: number;
  /** inclusive upper rank */
  hi: number;
}

export function cellKey(x: number, y: number, z: number): string {
  return `${x},${y},${z}`;
}

/** Cells covered by the step at `rank` (leaf boxes expand to all their cells). */
export function stepCells(curve: CurvePayload, rank: number): string[] {
  const cells: string[] = [];
  const x0 = curve.x[rank];
  const y0 = curve.y[rank];
  const z0 = curve.z[rank];
  for (let dz = 0; dz < curve.ez[rank]; dz++) {
    for (let dy = 0; dy < curve.ey[rank]; dy++) {
      for (let dx = 0; dx < curve.ex[rank]; dx++) {
        cells.push(cellKey(x0 + dx, y0 + dy, z0 + dz));
      }
    }
  }
  return cells;
}

/** The preimage of a set of rank intervals: every covered cell, exactly once. */
export function highlightedCells(
  curve: CurvePayload,
  intervals: Iterable<RankInterval>,
): Set<string> {
  const out = new Set<string>();
  const n = curve.x.length;
  for (const interval of intervals) {
    const lo = Math.max(0, Math.ceil(Math.min(interval.lo, interval.hi)));
    const hi = Math.min(n - 1, Math.floor(Math.max(interval.lo, interval.hi)));
    for (let rank = lo; rank <= hi; rank++) {
      for (const key of stepCells(curve, rank)) {
        out.add(key);
      }
    }
  }
  return out;
}

/** Mutable collection of simultaneous brushes keyed by id. */
export class BrushSet {
  private brushes = new Map<number, RankInterval>();
  private nextId = 1;

  add(interval: RankInterval): number {
    const id = this.nextId++;
    this.brushes.set(id, interval);
    return id;
  }

  remove(id: number): boolean {
    return this.brushes.delete(id);
  }

  clear(): void {
    this.brushes.clear();
  }

  /** Id of some brush containing `rank`, or null. */
  hit(rank: number): number | null {
    for (const [id, b] of this.brushes) {
      if (rank >= Math.min(b.lo, b.hi) && rank <= Math.max(b.lo, b.hi)) return id;
    }
    return null;
  }

  intervals(): RankInterval[] {
    return [...this.brushes.values()];
  }

  get size(): number {
    return this.brushes.size;
  }

  highlight(curve: CurvePayload): Set<string> {
    return highlightedCells(curve, this.intervals());
  }
}
