/** Hand-rolled SVG primitives: no plotting library, fixed style, no
 * timestamps, so byte-identical output for identical inputs. */

export const WIDTH = 640;
export const HEIGHT = 420;
const ML = 70;
const MR = 18;
const MT = 40;
const MB = 52;

export const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f4a261", "#7209b7", "#577590"];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) {
    return v.toExponential(0).replace("e+", "e");
  }
  // trim trailing zeros without switching to exponent form
  return String(Number(v.toPrecision(6)));
}

export interface Axis {
  min: number;
  max: number;
  log: boolean;
  label: string;
}

export interface Frame {
  x: (v: number) => number;
  y: (v: number) => number;
  parts: string[];
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;
}

function pad(axis: Axis): [number, number] {
  let { min, max } = axis;
  if (axis.log) {
    if (min === max) {
      min /= 1.6;
      max *= 1.6;
    }
    return [min / 1.2, max * 1.2];
  }
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const span = max - min;
  return [min - 0.05 * span, max + 0.05 * span];
}

function ticks(axis: Axis, lo: number, hi: number): number[] {
  if (axis.log) {
    const out: number[] = [];
    for (let k = Math.ceil(Math.log10(lo)); Math.pow(10, k) <= hi * 1.0001; k++) {
      out.push(Math.pow(10, k));
    }
    if (out.length >= 2) return out;
    // under a decade of span: fall back to 1-2-5 steps
  }
  const span = hi - lo;
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((s) => s * mag).find((s) => span / s <= 6) ?? 10 * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return out;
}

export function makeFrame(xAxis: Axis, yAxis: Axis, title: string): Frame {
  const [xLo, xHi] = pad(xAxis);
  const [yLo, yHi] = pad(yAxis);
  const tx = (v: number) => (xAxis.log ? Math.log10(v) : v);
  const ty = (v: number) => (yAxis.log ? Math.log10(v) : v);
  const xSpan = tx(xHi) - tx(xLo);
  const ySpan = ty(yHi) - ty(yLo);
  const x = (v: number) => ML + ((tx(v) - tx(xLo)) / xSpan) * (WIDTH - ML - MR);
  const y = (v: number) => HEIGHT - MB - ((ty(v) - ty(yLo)) / ySpan) * (HEIGHT - MT - MB);

  const parts: string[] = [];
  parts.push(`<rect x="${ML}" y="${MT}" width="${WIDTH - ML - MR}" height="${HEIGHT - MT - MB}" fill="#fcfcfc" stroke="none"/>`);
  for (const tv of ticks(xAxis, xLo, xHi)) {
    const px = x(tv).toFixed(1);
    parts.push(`<line x1="${px}" y1="${MT}" x2="${px}" y2="${HEIGHT - MB}" stroke="#e4e4e4" stroke-width="1"/>`);
    parts.push(`<text x="${px}" y="${HEIGHT - MB + 16}" font-size="11" text-anchor="middle" fill="#444">${esc(fmt(tv))}</text>`);
  }
  for (const tv of ticks(yAxis, yLo, yHi)) {
    const py = y(tv).toFixed(1);
    parts.push(`<line x1="${ML}" y1="${py}" x2="${WIDTH - MR}" y2="${py}" stroke="#e4e4e4" stroke-width="1"/>`);
    parts.push(`<text x="${ML - 6}" y="${py}" font-size="11" text-anchor="end" dominant-baseline="middle" fill="#444">${esc(fmt(tv))}</text>`);
  }
  parts.push(`<rect x="${ML}" y="${MT}" width="${WIDTH - ML - MR}" height="${HEIGHT - MT - MB}" fill="none" stroke="#333" stroke-width="1"/>`);
  parts.push(`<text x="${(ML + WIDTH - MR) / 2}" y="${HEIGHT - 12}" font-size="13" text-anchor="middle" fill="#111">${esc(xAxis.label)}</text>`);
  parts.push(`<text x="16" y="${(MT + HEIGHT - MB) / 2}" font-size="13" text-anchor="middle" fill="#111" transform="rotate(-90 16 ${(MT + HEIGHT - MB) / 2})">${esc(yAxis.label)}</text>`);
  parts.push(`<text x="${WIDTH / 2}" y="22" font-size="15" text-anchor="middle" fill="#111">${esc(title)}</text>`);

  return {
    x,
    y,
    parts,
    plotLeft: ML,
    plotRight: WIDTH - MR,
    plotTop: MT,
    plotBottom: HEIGHT - MB,
  };
}

export function polyline(frame: Frame, pts: Array<[number, number]>, color: string,
                         width = 1.6, dash?: string, cls?: string): string {
  const d = pts.map(([vx, vy]) => `${frame.x(vx).toFixed(2)},${frame.y(vy).toFixed(2)}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  const clsAttr = cls ? ` class="${cls}"` : "";
  return `<polyline${clsAttr} points="${d}" fill="none" stroke="${color}" stroke-width="${width}"${dashAttr}/>`;
}

export function circle(frame: Frame, vx: number, vy: number, r: number,
                       color: string, opacity = 1): string {
  return `<circle cx="${frame.x(vx).toFixed(2)}" cy="${frame.y(vy).toFixed(2)}" r="${r}" fill="${color}" fill-opacity="${opacity}"/>`;
}

export function document(parts: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
    ...parts,
    `</svg>`,
  ].join("\n");
}

/** Legend rows drawn inside the top-right corner of the plot area. */
export function legend(frame: Frame, entries: Array<[string, string, string?]>): string[] {
  const parts: string[] = [];
  const x0 = frame.plotRight - 200;
  let yRow = frame.plotTop + 16;
  for (const [label, color, dash] of entries) {
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    parts.push(`<line x1="${x0}" y1="${yRow - 4}" x2="${x0 + 26}" y2="${yRow - 4}" stroke="${color}" stroke-width="2"${dashAttr}/>`);
    parts.push(`<text x="${x0 + 32}" y="${yRow}" font-size="11" fill="#222">${esc(label)}</text>`);
    yRow += 16;
  }
  return parts;
}
