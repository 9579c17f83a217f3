import type { AggregateSeries } from "./csv.js";
import {
  DEFAULT_MARGIN, PALETTE, axes, document, linearScale, polygon, polyline, text,
} from "./svg.js";

export interface HvPlotSpec {
  width?: number;
  height?: number;
  /** draw the mean±std band behind each curve (default true) */
  band?: boolean;
  /** reference-point annotation, e.g. [1, 10] */
  ref?: [number, number];
  title?: string;
}

/** Hypervolume-evolution chart: one curve per series with a shaded ±1 std
 * band. The band degenerates to the curve itself when every std is zero. */
export function renderHvPlot(series: AggregateSeries[], spec: HvPlotSpec = {}): string {
  if (series.length === 0) {
    throw new Error("need at least one aggregate series");
  }
  const width = spec.width ?? 720;
  const height = spec.height ?? 460;
  const band = spec.band ?? true;
  const m = DEFAULT_MARGIN;

  const allIter = series.flatMap((s) => s.iter);
  const lows = series.flatMap((s) => s.hvMean.map((v, i) => v - s.hvStd[i]));
  const highs = series.flatMap((s) => s.hvMean.map((v, i) => v + s.hvStd[i]));
  const yLo = Math.min(...lows);
  const yHi = Math.max(...highs);
  const pad = (yHi - yLo || 1) * 0.05;

  const x = linearScale([Math.min(...allIter), Math.max(...allIter)],
                        [m.left, width - m.right]);
  const y = linearScale([yLo - pad, yHi + pad], [height - m.bottom, m.top]);

  const parts: string[] = [];
  parts.push(axes({ x, y, xLabel: "iteration", yLabel: "hypervolume" }));

  series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    if (band) {
      const upper = s.iter.map((it, i): [number, number] =>
        [x(it), y(s.hvMean[i] + s.hvStd[i])]);
      const lower = s.iter.map((it, i): [number, number] =>
        [x(it), y(s.hvMean[i] - s.hvStd[i])]);
      parts.push(polygon([...upper, ...lower.reverse()], color, 0.18));
    }
    parts.push(polyline(s.iter.map((it, i): [number, number] =>
      [x(it), y(s.hvMean[i])]), color));
    const lx = width - m.right - 150;
    const ly = m.top + 16 * si + 4;
    parts.push(polyline([[lx, ly - 4], [lx + 22, ly - 4]], color, 3));
    parts.push(text(lx + 28, ly, s.label, 'font-size="12"'));
  });

  if (spec.ref) {
    parts.push(text(m.left + 6, m.top - 10,
      `reference point = [${spec.ref[0]}, ${spec.ref[1]}]`, 'font-size="12" fill="#555"'));
  }
  if (spec.title) {
    parts.push(text(width / 2, 16, spec.title,
      'font-size="14" text-anchor="middle" font-weight="bold"'));
  }
  return document(width, height, parts.join("\n"));
}
