export { parseCsv, columnIndex, readSweepRows, SchemaError } from "./csv.js";
export {
  SWEEP_COLUMNS,
  ISLANDS_COLUMNS,
  FRONTIER_COLUMNS,
  CELLS_COLUMNS,
} from "./csv.js";
export { parseFitText } from "./fit.js";
export {
  buildFigure,
  scalingFigure,
  islandsFigure,
  frontierFigure,
  cellsFigure,
} from "./figures.js";
export type { FigureSpec, RenderedFigure } from "./figures.js";
export { main } from "./cli.js";
