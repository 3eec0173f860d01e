/** Wires the line plot and spatial view over the artifact server API. */

import { ApiClient, type CurvePayload, type Meta } from "./api.js";
import { clampZ, Heatmap } from "./heatmap.js";
import { LinePlot } from "./lineplot.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function showError(message: string): void {
  const banner = el<HTMLDivElement>("error");
  banner.textContent = message;
  banner.style.display = "block";
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  let meta: Meta;
  let curve: CurvePayload;
  try {
    meta = await api.meta();
    curve = await api.curve();
  } catch (err) {
    showError(`failed to load run: ${err}`);
    return;
  }
  el<HTMLSpanElement>("summary").textContent =
    `${meta.method} over ${meta.dims.join("x")}` +
    (meta.alpha !== null ? ` (alpha=${meta.alpha})` : "") +
    `, ${meta.count} steps`;

  const heatmap = new Heatmap(el<HTMLCanvasElement>("spatial"));
  const is3d = meta.dims.length === 3 && meta.dims[2] > 1;
  const slider = el<HTMLInputElement>("zslider");
  const sliderWrap = el<HTMLDivElement>("zslider-wrap");
  const notice = el<HTMLSpanElement>("znotice");

  async function loadSlice(zRaw: number): Promise<void> {
    const depth = is3d ? meta.dims[2] : 1;
    const { z, clamped } = clampZ(zRaw, depth);
    notice.textContent = clamped ? `slice clamped to ${z}` : "";
    try {
      const slice = await api.slice(is3d ? z : undefined);
      heatmap.setSlice(slice);
    } catch (err) {
      showError(`failed to load slice: ${err}`);
    }
  }

  if (is3d) {
    sliderWrap.style.display = "block";
    slider.max = String(meta.dims[2] - 1);
    slider.addEventListener("input", () => void loadSlice(Number(slider.value)));
  } else {
    sliderWrap.style.display = "none";
  }

  let plot: LinePlot;
  try {
    const values = await api.values();
    plot = new LinePlot(el<HTMLCanvasElement>("lineplot"), values.u, values.bands, {
      onBrushChange: () => heatmap.setHighlights(plot.brushes.highlight(curve)),
    });
  } catch (err) {
    showError(`failed to load values: ${err}`);
    return;
  }
  await loadSlice(0);
}

void boot();
