#!/usr/bin/env node
/** Command line: render --kind scaling --in sweep.csv --fit fit.txt --out fig.svg
 *
 * Exit codes: 0 ok, 1 file errors, 2 usage or schema mismatch.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";

import { parseCsv, SchemaError, type Table } from "./csv.js";
import { parseFitText, type FitSummary } from "./fit.js";
import { buildFigure, type FigureSpec } from "./figures.js";

const KINDS = ["scaling", "islands", "frontier", "cells"] as const;

const USAGE =
  "usage: render --kind {scaling|islands|frontier|cells} --in data.csv [--in more.csv]" +
  " [--fit fit.txt] --out fig.svg [--log-x] [--log-y]";

export function parseArgs(argv: string[], err: (s: string) => void): FigureSpec | null {
  const args = argv[0] === "render" ? argv.slice(1) : [...argv];
  let kind: string | undefined;
  const inputs: string[] = [];
  let fitPath: string | undefined;
  let out: string | undefined;
  let logX: boolean | undefined;
  let logY: boolean | undefined;

  for (let i = 0; i < args.length; i++) {
    const a = args[i];
    const need = (): string | null => {
      if (i + 1 >= args.length) {
        err(`missing value for ${a}`);
        return null;
      }
      return args[++i];
    };
    switch (a) {
      case "--kind": {
        const v = need();
        if (v === null) return null;
        kind = v;
        break;
      }
      case "--in": {
        const v = need();
        if (v === null) return null;
        inputs.push(v);
        break;
      }
      case "--fit": {
        const v = need();
        if (v === null) return null;
        fitPath = v;
        break;
      }
      case "--out": {
        const v = need();
        if (v === null) return null;
        out = v;
        break;
      }
      case "--log-x":
        logX = true;
        break;
      case "--log-y":
        logY = true;
        break;
      case "--help":
      case "-h":
        err(USAGE);
        return null;
      default:
        err(`unknown argument: ${a}`);
        err(USAGE);
        return null;
    }
  }
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    err(`--kind must be one of ${KINDS.join(", ")}`);
    return null;
  }
  if (inputs.length === 0 || !out) {
    err(USAGE);
    return null;
  }
  return { kind: kind as FigureSpec["kind"], inputs, fitPath, out, logX, logY };
}

export function main(argv: string[], err: (s: string) => void = (s) => console.error(s)): number {
  const spec = parseArgs(argv, err);
  if (spec === null) return 2;
  try {
    const tables: Table[] = spec.inputs.map((p) => parseCsv(readFileSync(p, "utf-8")));
    let fit: FitSummary | null = null;
    if (spec.fitPath) {
      fit = parseFitText(readFileSync(spec.fitPath, "utf-8"));
    }
    const fig = buildFigure(spec, tables, fit);
    writeFileSync(spec.out, fig.svg + "\n");
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      err(`schema mismatch in input: column '${e.column}' (${e.message})`);
      return 2;
    }
    err(String(e instanceof Error ? e.message : e));
    return 1;
  }
}

const invoked = process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invoked) {
  process.exit(main(process.argv.slice(2)));
}
