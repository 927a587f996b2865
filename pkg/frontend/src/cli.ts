/**
 * render --kind <ops-boxplot|app-boxplot|cdf|trace> --in <csv> --out <svg>
 *
 * Output is written only after the figure renders completely, so a schema
 * error never leaves a partial image behind.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { FigureKind, FigureOptions, render } from "./figures.js";

const KINDS: FigureKind[] = ["ops-boxplot", "app-boxplot", "cdf", "trace"];

interface Args {
  kind: FigureKind;
  input: string;
  output: string;
  options: FigureOptions;
}

export function parseArgs(argv: string[]): Args {
  if (argv[0] !== "render") {
    throw new Error(`unknown command ${argv[0] ?? "(none)"}; expected "render"`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`malformed flag ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  const kind = flags.get("kind") as FigureKind | undefined;
  const input = flags.get("in");
  const output = flags.get("out");
  if (!kind || !KINDS.includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (!input || !output) {
    throw new Error("--in and --out are required");
  }
  if (!output.endsWith(".svg")) {
    throw new Error("output is SVG; name the file *.svg (rasterizing needs an external tool)");
  }
  const options: FigureOptions = {};
  if (flags.has("floor")) {
    const floor = Number(flags.get("floor"));
    if (!(floor > 0)) {
      throw new Error("--floor must be a positive number");
    }
    options.floor = floor;
  }
  if (flags.has("width")) {
    options.width = Number(flags.get("width"));
  }
  return { kind, input, output, options };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(`usage error: ${(e as Error).message}`);
    return 1;
  }
  try {
    const csvText = readFileSync(args.input, "utf-8");
    const { svg, warnings } = render(args.kind, csvText, args.options);
    for (const w of warnings) {
      console.warn(`warning: ${w}`);
    }
    writeFileSync(args.output, svg, "utf-8");
    console.log(`wrote ${args.output}`);
    return 0;
  } catch (e) {
    console.error(`render failed: ${(e as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
