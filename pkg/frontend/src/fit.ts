/** Parser for the fit summary text the sweep pipeline writes. */

import { SchemaError } from "./csv.js";

export interface FitSummary {
  alpha: number; // NaN when the sweep held n fixed
  beta: number;
  intercept: number;
  residual: number;
  ciAlpha: number;
  ciBeta: number;
}

const KEYS = ["alpha", "beta", "intercept", "residual", "ci_alpha", "ci_beta"];

export function parseFitText(text: string): FitSummary {
  const vals: Record<string, number> = {};
  for (const line of text.split(/\r?\n/)) {
    if (!line.trim()) continue;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new SchemaError("(fit)", `bad fit line: ${line}`);
    }
    vals[line.slice(0, eq).trim()] = Number.parseFloat(line.slice(eq + 1));
  }
  for (const k of KEYS) {
    if (!(k in vals)) {
      throw new SchemaError(k, `fit file missing '${k}'`);
    }
  }
  return {
    alpha: vals.alpha,
    beta: vals.beta,
    intercept: vals.intercept,
    residual: vals.residual,
    ciAlpha: vals.ci_alpha,
    ciBeta: vals.ci_beta,
  };
}
