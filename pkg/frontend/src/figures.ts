/** Figure builders: pure functions from parsed inputs to SVG text.
 *
 * Figures are views of the CSVs; nothing is re-simulated.  The scaling
 * figure overlays the two candidate completion-time laws, anchored to the
 * data by an intercept-only least squares in log space.
 */

import {
  CELLS_COLUMNS,
  columnIndex,
  FRONTIER_COLUMNS,
  ISLANDS_COLUMNS,
  readSweepRows,
  type SweepRow,
  type Table,
} from "./csv.js";
import type { FitSummary } from "./fit.js";
import * as svg from "./svg.js";

export interface FigureSpec {
  kind: "scaling" | "islands" | "frontier" | "cells";
  inputs: string[];
  fitPath?: string;
  out: string;
  logX?: boolean;
  logY?: boolean;
}

export interface RenderedFigure {
  svg: string;
  meta: Record<string, number | null>;
}

function median(values: number[]): number {
  const s = [...values].sort((a, b) => a - b);
  const h = s.length >> 1;
  return s.length % 2 === 1 ? s[h] : (s[h - 1] + s[h]) / 2;
}

interface Cell {
  n: number;
  m: number;
  med: number;
  points: number[];
}

function collectCells(rows: SweepRow[]): Cell[] {
  const byKey = new Map<string, { n: number; m: number; points: number[] }>();
  for (const r of rows) {
    if (r.completionTime === null) continue; // timed-out trial, no value to plot
    const key = `${r.n}|${r.m}`;
    let c = byKey.get(key);
    if (!c) {
      c = { n: r.n, m: r.m, points: [] };
      byKey.set(key, c);
    }
    c.points.push(r.completionTime);
  }
  return [...byKey.values()]
    .map((c) => ({ n: c.n, m: c.m, med: median(c.points), points: c.points }))
    .sort((a, b) => a.n - b.n || a.m - b.m);
}

const LAWS: Array<{ label: string; dash: string; value: (n: number, m: number) => number }> = [
  { label: "n/sqrt(m) law", dash: "7,4", value: (n, m) => n / Math.sqrt(m) },
  { label: "n ln(n) ln(m)/m law", dash: "2,3", value: (n, m) => (n * Math.log(n) * Math.log(m)) / m },
];

export function scalingFigure(tables: Table[], fit: FitSummary | null,
                              logX = true, logY = true): RenderedFigure {
  const rows = tables.flatMap(readSweepRows);
  const cells = collectCells(rows);
  if (cells.length === 0) {
    const frame = svg.makeFrame(
      { min: 1, max: 10, log: false, label: "agents m" },
      { min: 1, max: 10, log: false, label: "completion time" },
      "scaling (no completed trials)");
    return { svg: svg.document(frame.parts), meta: { slope: null, laws: 0, cells: 0 } };
  }

  const ns = [...new Set(cells.map((c) => c.n))].sort((a, b) => a - b);
  const allTimes = cells.flatMap((c) => c.points);
  const mLo = Math.min(...cells.map((c) => c.m));
  const mHi = Math.max(...cells.map((c) => c.m));
  const first = rows[0];
  const title = ns.length === 1
    ? `${first.scenario} on ${first.topology}, n=${ns[0]}`
    : `${first.scenario} on ${first.topology}`;

  const frame = svg.makeFrame(
    { min: mLo, max: mHi, log: logX, label: "agents m" },
    { min: Math.min(...allTimes), max: Math.max(...allTimes), log: logY, label: "completion time (steps)" },
    title);
  const parts = [...frame.parts];
  const legendEntries: Array<[string, string, string?]> = [];

  const drawLines = cells.length >= 2;
  let lawsDrawn = 0;
  if (drawLines) {
    for (const law of LAWS) {
      // anchor by intercept-only least squares against the medians
      let sum = 0;
      let cnt = 0;
      for (const c of cells) {
        const lv = law.value(c.n, c.m);
        if (lv > 0 && Number.isFinite(lv)) {
          sum += Math.log(c.med) - Math.log(lv);
          cnt += 1;
        }
      }
      if (cnt === 0) continue;
      const scale = Math.exp(sum / cnt);
      for (const n of ns) {
        const pts: Array<[number, number]> = [];
        for (let i = 0; i <= 64; i++) {
          const m = logX
            ? mLo * Math.pow(mHi / mLo, i / 64)
            : mLo + ((mHi - mLo) * i) / 64;
          const lv = law.value(n, m);
          if (lv > 0 && Number.isFinite(lv)) pts.push([m, scale * lv]);
        }
        if (pts.length >= 2) {
          parts.push(svg.polyline(frame, pts, "#666", 1.2, law.dash, "law"));
        }
      }
      lawsDrawn += 1;
      legendEntries.push([law.label, "#666", law.dash]);
    }
  }

  ns.forEach((n, i) => {
    const color = svg.PALETTE[i % svg.PALETTE.length];
    const own = cells.filter((c) => c.n === n);
    for (const c of own) {
      for (const t of c.points) {
        parts.push(svg.circle(frame, c.m, t, 2, color, 0.25));
      }
    }
    if (drawLines && own.length >= 2) {
      parts.push(svg.polyline(frame, own.map((c) => [c.m, c.med]), color, 1.8));
    }
    for (const c of own) {
      parts.push(svg.circle(frame, c.m, c.med, 3.4, color, 1));
    }
    legendEntries.push([ns.length === 1 ? "median per m" : `median, n=${n}`, color]);
  });

  let slope: number | null = null;
  if (fit && Number.isFinite(fit.beta)) {
    slope = fit.beta;
    for (const n of ns) {
      const aTerm = Number.isFinite(fit.alpha) ? fit.alpha * Math.log(n) : 0;
      const pts: Array<[number, number]> = [];
      for (let i = 0; i <= 64; i++) {
        const m = logX
          ? mLo * Math.pow(mHi / mLo, i / 64)
          : mLo + ((mHi - mLo) * i) / 64;
        pts.push([m, Math.exp(fit.intercept + aTerm + fit.beta * Math.log(m))]);
      }
      parts.push(svg.polyline(frame, pts, "#111", 1.4, "10,3", "fitline"));
    }
    legendEntries.push(["fitted power law", "#111", "10,3"]);
  } else if (drawLines) {
    // no fit file: least squares of ln(median) on ln(m) over the cells
    const xs = cells.map((c) => Math.log(c.m));
    const ys = cells.map((c) => Math.log(c.med));
    const xb = xs.reduce((a, b) => a + b, 0) / xs.length;
    const yb = ys.reduce((a, b) => a + b, 0) / ys.length;
    let num = 0;
    let den = 0;
    for (let i = 0; i < xs.length; i++) {
      num += (xs[i] - xb) * (ys[i] - yb);
      den += (xs[i] - xb) ** 2;
    }
    if (den > 0) slope = num / den;
  }
  if (slope !== null) {
    parts.push(`<text class="slope-note" x="${frame.plotLeft + 10}" y="${frame.plotTop + 18}" font-size="12" fill="#111">slope = ${slope.toFixed(4)}</text>`);
  }
  parts.push(...svg.legend(frame, legendEntries));

  return {
    svg: svg.document(parts),
    meta: { slope, laws: lawsDrawn, cells: cells.length },
  };
}

export function islandsFigure(tables: Table[]): RenderedFigure {
  const counts = new Map<number, number>();
  let maxSize = 0;
  let label = "";
  for (const table of tables) {
    const ix = columnIndex(table, ISLANDS_COLUMNS);
    for (const r of table.rows) {
      const v = Number(r[ix.max_island]);
      counts.set(v, (counts.get(v) ?? 0) + 1);
      if (v > maxSize) maxSize = v;
      if (!label) label = `n=${r[ix.n]}, m=${r[ix.m]}, gamma=${r[ix.gamma]}`;
    }
  }
  const total = [...counts.values()].reduce((a, b) => a + b, 0);
  const peak = Math.max(1, ...counts.values());
  const frame = svg.makeFrame(
    { min: 0, max: Math.max(1, maxSize), log: false, label: "max island size" },
    { min: 0, max: peak, log: false, label: "recorded instants" },
    `island sizes (${label || "empty"})`);
  const parts = [...frame.parts];
  // unit-width bins with edges on the integers; the last edge is the
  // largest observed size
  for (let k = 1; k <= maxSize; k++) {
    const c = counts.get(k) ?? 0;
    if (c === 0) continue;
    const x0 = frame.x(k - 1);
    const x1 = frame.x(k);
    const y0 = frame.y(0);
    const y1 = frame.y(c);
    parts.push(`<rect class="bin" x="${x0.toFixed(2)}" y="${y1.toFixed(2)}" width="${(x1 - x0).toFixed(2)}" height="${(y0 - y1).toFixed(2)}" fill="${svg.PALETTE[0]}" fill-opacity="0.8" stroke="#fff"/>`);
  }
  return { svg: svg.document(parts), meta: { maxBinEdge: maxSize, instants: total } };
}

export function frontierFigure(tables: Table[]): RenderedFigure {
  const ts: number[] = [];
  const xs: number[] = [];
  const ys: number[] = [];
  let label = "";
  for (const table of tables) {
    const ix = columnIndex(table, FRONTIER_COLUMNS);
    for (const r of table.rows) {
      ts.push(Number(r[ix.t]));
      xs.push(Number(r[ix.xbar_x]));
      ys.push(Number(r[ix.xbar_y]));
      if (!label) label = `n=${r[ix.n]}, m=${r[ix.m]}`;
    }
  }
  const lo = Math.min(...xs, ...ys);
  const hi = Math.max(...xs, ...ys);
  const frame = svg.makeFrame(
    { min: Math.min(...ts), max: Math.max(...ts), log: false, label: "step t" },
    { min: lo, max: hi, log: false, label: "frontier mean coordinate" },
    `frontier trajectory (${label})`);
  const parts = [...frame.parts];
  parts.push(svg.polyline(frame, ts.map((t, i) => [t, xs[i]]), svg.PALETTE[0], 1.6));
  parts.push(svg.polyline(frame, ts.map((t, i) => [t, ys[i]]), svg.PALETTE[1], 1.6));
  parts.push(...svg.legend(frame, [
    ["mean x of the frontier", svg.PALETTE[0]],
    ["mean y of the frontier", svg.PALETTE[1]],
  ]));
  return { svg: svg.document(parts), meta: { points: ts.length } };
}

function lerpColor(a: [number, number, number], b: [number, number, number], t: number): string {
  const c = a.map((av, i) => Math.round(av + (b[i] - av) * t));
  return `#${c.map((v) => v.toString(16).padStart(2, "0")).join("")}`;
}

const RAMP_LOW: [number, number, number] = [0xf5, 0xe6, 0x63]; // early conquest
const RAMP_HIGH: [number, number, number] = [0x27, 0x2a, 0x6e]; // late conquest
const NEVER_FILL = "#d9d9d9";

export function cellsFigure(tables: Table[]): RenderedFigure {
  interface CellRec { x: number; y: number; conquered: number | null }
  const recs: CellRec[] = [];
  let label = "";
  for (const table of tables) {
    const ix = columnIndex(table, CELLS_COLUMNS);
    for (const r of table.rows) {
      const fc = r[ix.first_conquered];
      recs.push({
        x: Number(r[ix.cell_x]),
        y: Number(r[ix.cell_y]),
        conquered: fc === "" ? null : Number(fc),
      });
      if (!label) label = `n=${r[ix.n]}, m=${r[ix.m]}, cell=${r[ix.cell_side]}`;
    }
  }
  const ncx = Math.max(...recs.map((r) => r.x)) + 1;
  const ncy = Math.max(...recs.map((r) => r.y)) + 1;
  const times = recs.filter((r) => r.conquered !== null).map((r) => r.conquered as number);
  const tLo = times.length ? Math.min(...times) : 0;
  const tHi = times.length ? Math.max(...times) : 1;

  const plotW = svg.WIDTH - 140;
  const plotH = svg.HEIGHT - 90;
  const side = Math.min(plotW / ncx, plotH / ncy);
  const ox = 60;
  const oy = 50;
  const parts: string[] = [];
  parts.push(`<text x="${svg.WIDTH / 2}" y="24" font-size="15" text-anchor="middle" fill="#111">conquest wavefront (${svg.esc(label)})</text>`);
  let never = 0;
  for (const r of recs) {
    let fill = NEVER_FILL;
    if (r.conquered === null) {
      never += 1;
    } else {
      const t = tHi > tLo ? (r.conquered - tLo) / (tHi - tLo) : 0;
      fill = lerpColor(RAMP_LOW, RAMP_HIGH, t);
    }
    const px = ox + r.x * side;
    const py = oy + (ncy - 1 - r.y) * side;
    parts.push(`<rect x="${px.toFixed(2)}" y="${py.toFixed(2)}" width="${side.toFixed(2)}" height="${side.toFixed(2)}" fill="${fill}" stroke="#ffffff" stroke-width="0.4"/>`);
  }
  // color bar
  const barX = ox + ncx * side + 18;
  for (let i = 0; i < 40; i++) {
    const fill = lerpColor(RAMP_LOW, RAMP_HIGH, i / 39);
    parts.push(`<rect x="${barX}" y="${(oy + (39 - i) * (ncy * side / 40)).toFixed(2)}" width="14" height="${(ncy * side / 40 + 0.5).toFixed(2)}" fill="${fill}"/>`);
  }
  parts.push(`<text x="${barX + 18}" y="${oy + 10}" font-size="10" fill="#222">t=${svg.fmt(tHi)}</text>`);
  parts.push(`<text x="${barX + 18}" y="${oy + ncy * side}" font-size="10" fill="#222">t=${svg.fmt(tLo)}</text>`);
  if (never > 0) {
    parts.push(`<text x="${ox}" y="${oy + ncy * side + 18}" font-size="11" fill="#444">gray cells were never conquered (${never})</text>`);
  }
  return { svg: svg.document(parts), meta: { ncx, ncy, never } };
}

export function buildFigure(spec: FigureSpec, tables: Table[],
                            fit: FitSummary | null): RenderedFigure {
  switch (spec.kind) {
    case "scaling":
      return scalingFigure(tables, fit, spec.logX ?? true, spec.logY ?? true);
    case "islands":
      return islandsFigure(tables);
    case "frontier":
      return frontierFigure(tables);
    case "cells":
      return cellsFigure(tables);
  }
}
