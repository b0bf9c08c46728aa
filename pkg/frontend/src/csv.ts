/** CSV reading against the fixed schemas the simulator emits. */

export class SchemaError extends Error {
  column: string;

  constructor(column: string, detail: string) {
    super(detail);
    this.name = "SchemaError";
    this.column = column;
  }
}

export interface Table {
  header: string[];
  rows: string[][];
}

/** Minimal parser: the emitters never quote fields, so split is enough. */
export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("(header)", "empty CSV file");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((l) => l.split(","));
  return { header, rows };
}

/**
 * Demand an exact column set and return name -> index.  The first column
 * missing from the file, or the first unexpected one, names the error.
 */
export function columnIndex(table: Table, expected: string[]): Record<string, number> {
  const have = new Set(table.header);
  for (const col of expected) {
    if (!have.has(col)) {
      throw new SchemaError(col, `missing column '${col}'`);
    }
  }
  const want = new Set(expected);
  for (const col of table.header) {
    if (!want.has(col)) {
      throw new SchemaError(col, `unexpected column '${col}'`);
    }
  }
  const idx: Record<string, number> = {};
  table.header.forEach((c, i) => (idx[c] = i));
  return idx;
}

export const SWEEP_COLUMNS = [
  "topology", "scenario", "n", "m", "trial", "seed",
  "completion_time", "timeout", "realized_m", "wall_ms",
];

export const ISLANDS_COLUMNS = ["n", "m", "gamma", "t", "max_island", "num_islands"];

export const FRONTIER_COLUMNS = ["n", "m", "t", "xbar_x", "xbar_y"];

export const CELLS_COLUMNS = [
  "n", "m", "cell_side", "cell_x", "cell_y", "first_reached", "first_conquered",
];

export interface SweepRow {
  topology: string;
  scenario: string;
  n: number;
  m: number;
  trial: number;
  completionTime: number | null; // null = timed out (blank in the file)
  timeout: boolean;
}

export function readSweepRows(table: Table): SweepRow[] {
  const ix = columnIndex(table, SWEEP_COLUMNS);
  return table.rows.map((r) => {
    const ct = r[ix.completion_time];
    return {
      topology: r[ix.topology],
      scenario: r[ix.scenario],
      n: Number(r[ix.n]),
      m: Number(r[ix.m]),
      trial: Number(r[ix.trial]),
      completionTime: ct === "" ? null : Number(ct),
      timeout: r[ix.timeout] === "1",
    };
  });
}
