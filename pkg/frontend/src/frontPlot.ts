import type { FrontPoint } from "./csv.js";
import {
  DEFAULT_MARGIN, axes, circle, document, ellipse, linearScale, text,
} from "./svg.js";

export interface FrontPlotSpec {
  width?: number;
  height?: number;
  /** reference point marker, e.g. [1, 10] */
  ref?: [number, number];
  title?: string;
  color?: string;
}

/** Observed-Pareto-front scatter: one marker per point with an axis-aligned
 * ellipse of half-widths equal to the per-objective replication stds (a zero
 * std collapses the ellipse to the marker). */
export function renderFrontPlot(points: FrontPoint[], spec: FrontPlotSpec = {}): string {
  if (points.length === 0) {
    throw new Error("front is empty; nothing to plot");
  }
  const width = spec.width ?? 560;
  const height = spec.height ?? 460;
  const m = DEFAULT_MARGIN;
  const color = spec.color ?? "#1f77b4";

  const xs = points.flatMap((p) => [p.mean[0] - p.std[0], p.mean[0] + p.std[0]]);
  const ys = points.flatMap((p) => [p.mean[1] - p.std[1], p.mean[1] + p.std[1]]);
  if (spec.ref) {
    xs.push(spec.ref[0]);
    ys.push(spec.ref[1]);
  }
  const padX = (Math.max(...xs) - Math.min(...xs) || 1) * 0.06;
  const padY = (Math.max(...ys) - Math.min(...ys) || 1) * 0.06;
  const x = linearScale([Math.min(...xs) - padX, Math.max(...xs) + padX],
                        [m.left, width - m.right]);
  const y = linearScale([Math.min(...ys) - padY, Math.max(...ys) + padY],
                        [height - m.bottom, m.top]);

  const parts: string[] = [];
  parts.push(axes({ x, y, xLabel: "objective 1", yLabel: "objective 2" }));

  const unitX = Math.abs(x(1) - x(0));
  const unitY = Math.abs(y(1) - y(0));
  for (const p of points) {
    parts.push(ellipse(x(p.mean[0]), y(p.mean[1]),
                       p.std[0] * unitX, p.std[1] * unitY, color, 0.2));
  }
  for (const p of points) {
    parts.push(circle(x(p.mean[0]), y(p.mean[1]), 3, color));
  }

  if (spec.ref) {
    const rx = x(spec.ref[0]);
    const ry = y(spec.ref[1]);
    parts.push(`<path d="M ${(rx - 5).toFixed(2)} ${(ry - 5).toFixed(2)} l 10 10 m 0 -10 l -10 10" stroke="#d62728" stroke-width="2" fill="none"/>`);
    parts.push(text(rx + 8, ry - 6, "ref", 'font-size="11" fill="#d62728"'));
  }
  if (spec.title) {
    parts.push(text(width / 2, 16, spec.title,
      'font-size="14" text-anchor="middle" font-weight="bold"'));
  }
  return document(width, height, parts.join("\n"));
}
