export { render, BINARY64_MIN_EXPONENT } from "./figures.js";
export type { FigureKind, FigureOptions, RenderResult } from "./figures.js";
export { parseCsv, requireColumns, SchemaError } from "./csv.js";
export { linearScale, decadeTicks } from "./svg.js";
export { main as cliMain, parseArgs } from "./cli.js";
