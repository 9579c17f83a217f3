/** Minimal SVG chart scaffolding: linear scales, tick generation and a
 * handful of element builders. Output is deterministic for fixed input. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGIN: Margin = { top: 28, right: 20, bottom: 44, left: 62 };

export interface LinearScale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as LinearScale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round ticks covering the domain, in the spirit of d3's nice ticks. */
export function ticks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(count, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-9 * step; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e5 || abs < 1e-3) return v.toExponential(1);
  return Number(v.toPrecision(6)).toString();
}

export const esc = (s: string): string =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export function polyline(pts: Array<[number, number]>, stroke: string, width = 1.6): string {
  const attr = pts.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  return `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`;
}

export function polygon(pts: Array<[number, number]>, fill: string, opacity: number): string {
  const attr = pts.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
  return `<polygon points="${attr}" fill="${fill}" fill-opacity="${opacity}" stroke="none"/>`;
}

export function ellipse(cx: number, cy: number, rx: number, ry: number,
                        fill: string, opacity: number): string {
  return `<ellipse cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" rx="${rx.toFixed(2)}" ` +
    `ry="${ry.toFixed(2)}" fill="${fill}" fill-opacity="${opacity}" stroke="none"/>`;
}

export function circle(cx: number, cy: number, r: number, fill: string): string {
  return `<circle cx="${cx.toFixed(2)}" cy="${cy.toFixed(2)}" r="${r}" fill="${fill}"/>`;
}

export function text(x: number, y: number, s: string, attrs = ""): string {
  return `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-family="sans-serif" ${attrs}>${esc(s)}</text>`;
}

export interface AxisSpec {
  x: LinearScale;
  y: LinearScale;
  xLabel: string;
  yLabel: string;
}

export function axes(spec: AxisSpec): string {
  const { x, y } = spec;
  const [x0, x1] = x.range;
  const [yBottom, yTop] = y.range;
  const parts: string[] = [];
  parts.push(`<line x1="${x0}" y1="${yBottom}" x2="${x1}" y2="${yBottom}" stroke="#333"/>`);
  parts.push(`<line x1="${x0}" y1="${yBottom}" x2="${x0}" y2="${yTop}" stroke="#333"/>`);
  for (const t of ticks(x.domain[0], x.domain[1])) {
    const px = x(t);
    parts.push(`<line x1="${px.toFixed(2)}" y1="${yBottom}" x2="${px.toFixed(2)}" y2="${yBottom + 5}" stroke="#333"/>`);
    parts.push(text(px, yBottom + 18, fmt(t), 'font-size="11" text-anchor="middle"'));
  }
  for (const t of ticks(y.domain[0], y.domain[1])) {
    const py = y(t);
    parts.push(`<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#333"/>`);
    parts.push(text(x0 - 8, py + 4, fmt(t), 'font-size="11" text-anchor="end"'));
    parts.push(`<line x1="${x0}" y1="${py.toFixed(2)}" x2="${x1}" y2="${py.toFixed(2)}" stroke="#ddd" stroke-dasharray="2,3"/>`);
  }
  const midX = (x0 + x1) / 2;
  const midY = (yBottom + yTop) / 2;
  parts.push(text(midX, yBottom + 36, spec.xLabel, 'font-size="13" text-anchor="middle"'));
  parts.push(
    `<text x="16" y="${midY.toFixed(2)}" font-family="sans-serif" font-size="13" ` +
    `text-anchor="middle" transform="rotate(-90 16 ${midY.toFixed(2)})">${esc(spec.yLabel)}</text>`);
  return parts.join("\n");
}

export function document(width: number, height: number, body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n<rect width="${width}" height="${height}" fill="white"/>\n` +
    `${body}\n</svg>\n`;
}
