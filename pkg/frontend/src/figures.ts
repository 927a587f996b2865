/**
 * Figure renderers for the harness CSV schemas.
 *
 * Three layouts: per-bucket accuracy boxplots (operation or application
 * results), per-system error CDFs, and the alpha-exponent trace with the
 * dotted binary64-floor reference line.  Every drawn mark comes from a CSV
 * row; cells without valid data are skipped with a warning, never
 * fabricated.
 */

import { SchemaError, Table, col, num, parseCsv, requireColumns } from "./csv.js";
import { colorFor, decadeTicks, el, linearScale, linearTicks, px, svgDocument } from "./svg.js";

export type FigureKind = "ops-boxplot" | "app-boxplot" | "cdf" | "trace";

export interface FigureOptions {
  /** Errors of exactly zero are drawn at this floor on the log axis. */
  floor?: number;
  width?: number;
}

export interface RenderResult {
  svg: string;
  warnings: string[];
}

export const BINARY64_MIN_EXPONENT = -1074;
const DEFAULT_FLOOR = 1e-18;

const MARGIN = { top: 34, right: 24, bottom: 46, left: 64 };
const PANEL_HEIGHT = 240;
const PANEL_GAP = 30;

export function render(kind: FigureKind, csvText: string, options: FigureOptions = {}): RenderResult {
  const table = parseCsv(csvText);
  switch (kind) {
    case "ops-boxplot":
    case "app-boxplot":
      return renderBoxplot(table, options);
    case "cdf":
      return renderCdf(table, options);
    case "trace":
      return renderTrace(table, options);
    default:
      throw new SchemaError(`unknown figure kind ${kind as string}`);
  }
}

// ----------------------------------------------------------------- boxplot

const SUMMARY_SCHEMA = [
  "system",
  "op_or_app",
  "bucket_lo",
  "bucket_hi",
  "p5",
  "p25",
  "p50",
  "p75",
  "p95",
  "count",
  "underflow_count",
  "excluded_count",
];

interface Box {
  system: string;
  bucketLo: number;
  bucketHi: number;
  p: [number, number, number, number, number];
  clamped: boolean;
}

function renderBoxplot(table: Table, options: FigureOptions): RenderResult {
  requireColumns(table, SUMMARY_SCHEMA, "summary.csv");
  const floor = options.floor ?? DEFAULT_FLOOR;
  const warnings: string[] = [];

  const cSystem = col(table, "system");
  const cOp = col(table, "op_or_app");
  const cLo = col(table, "bucket_lo");
  const cHi = col(table, "bucket_hi");
  const pCols = ["p5", "p25", "p50", "p75", "p95"].map((name) => col(table, name));
  const cCount = col(table, "count");
  const cExcluded = col(table, "excluded_count");

  const panels = new Map<string, Box[]>();
  const systems: string[] = [];
  for (const row of table.rows) {
    const system = row[cSystem];
    if (!systems.includes(system)) {
      systems.push(system);
    }
    const raw = pCols.map((i) => num(row[i]));
    const valid = Number(row[cCount]) > Number(row[cExcluded]) && raw.every((v) => Number.isFinite(v) || v === 0);
    if (!valid) {
      warnings.push(
        `skipping ${system} bucket [${row[cLo]},${row[cHi]}) of ${row[cOp]}: no plottable percentiles`
      );
      continue;
    }
    let clamped = false;
    const p = raw.map((v) => {
      if (v <= 0) {
        clamped = true;
        return floor;
      }
      return v;
    }) as Box["p"];
    const key = row[cOp];
    if (!panels.has(key)) {
      panels.set(key, []);
    }
    panels.get(key)!.push({
      system,
      bucketLo: Number(row[cLo]),
      bucketHi: Number(row[cHi]),
      p,
      clamped,
    });
  }
  if (panels.size === 0) {
    throw new SchemaError("summary.csv holds no plottable rows");
  }

  const width = options.width ?? 820;
  const innerW = width - MARGIN.left - MARGIN.right;
  const panelNames = [...panels.keys()].sort();
  const height = MARGIN.top + panelNames.length * (PANEL_HEIGHT + PANEL_GAP) + MARGIN.bottom - PANEL_GAP;

  const body: string[] = [];
  panelNames.forEach((panelName, panelIndex) => {
    const boxes = panels.get(panelName)!;
    const top = MARGIN.top + panelIndex * (PANEL_HEIGHT + PANEL_GAP);
    const buckets = [...new Set(boxes.map((b) => b.bucketLo))].sort((a, b) => a - b);
    const logs = boxes.flatMap((b) => b.p.map((v) => Math.log10(v)));
    const yLo = Math.floor(Math.min(...logs)) - 0.5;
    const yHi = Math.ceil(Math.max(...logs)) + 0.5;
    const y = linearScale([yLo, yHi], [top + PANEL_HEIGHT, top]);
    const slot = innerW / buckets.length;
    const boxW = Math.min(18, (slot - 10) / systems.length);

    body.push(
      el("text", { x: MARGIN.left, y: top - 10, "font-size": 13, "font-weight": "bold" }, [], panelName)
    );
    for (const tick of decadeTicks(yLo, yHi)) {
      const ty = px(y(tick));
      body.push(el("line", { x1: MARGIN.left, x2: MARGIN.left + innerW, y1: ty, y2: ty, stroke: "#ddd" }));
      body.push(
        el("text", { x: MARGIN.left - 8, y: ty + 4, "font-size": 10, "text-anchor": "end" }, [], `1e${tick}`)
      );
    }
    buckets.forEach((bucketLo, bi) => {
      const cell = boxes.filter((b) => b.bucketLo === bucketLo);
      const bucketHi = cell[0].bucketHi;
      const x0 = MARGIN.left + bi * slot;
      body.push(
        el(
          "text",
          { x: px(x0 + slot / 2), y: top + PANEL_HEIGHT + 16, "font-size": 9, "text-anchor": "middle" },
          [],
          `[2^${bucketLo}, 2^${bucketHi})`
        )
      );
      for (const box of cell) {
        const si = systems.indexOf(box.system);
        const cx = x0 + slot / 2 + (si - (systems.length - 1) / 2) * (boxW + 4);
        const color = colorFor(si);
        const [p5, p25, p50, p75, p95] = box.p.map((v) => Math.log10(v));
        const attrs = {
          "data-system": box.system,
          "data-bucket-lo": box.bucketLo,
          "data-p5": box.p[0],
          "data-p25": box.p[1],
          "data-p50": box.p[2],
          "data-p75": box.p[3],
          "data-p95": box.p[4],
        };
        body.push(
          el("g", attrs, [
            el("line", {
              x1: px(cx), x2: px(cx), y1: px(y(p5)), y2: px(y(p25)), stroke: color,
            }),
            el("line", {
              x1: px(cx), x2: px(cx), y1: px(y(p75)), y2: px(y(p95)), stroke: color,
            }),
            el("rect", {
              x: px(cx - boxW / 2),
              y: px(y(p75)),
              width: px(boxW),
              height: px(Math.max(0.5, y(p25) - y(p75))),
              fill: color,
              "fill-opacity": 0.35,
              stroke: color,
            }),
            el("line", {
              x1: px(cx - boxW / 2), x2: px(cx + boxW / 2), y1: px(y(p50)), y2: px(y(p50)),
              stroke: color, "stroke-width": 2,
            }),
            ...(box.clamped
              ? [
                  el(
                    "text",
                    { x: px(cx), y: px(y(p5) + 12), "font-size": 8, "text-anchor": "middle", fill: color },
                    [],
                    "exact"
                  ),
                ]
              : []),
          ])
        );
      }
    });
  });

  body.push(...legend(systems, width));
  body.push(axisLabel("relative error", height));
  return { svg: svgDocument(width, height, body), warnings };
}

// --------------------------------------------------------------------- cdf

const CDF_SCHEMA = ["system", "app", "relative_error", "cumulative_fraction"];

function renderCdf(table: Table, options: FigureOptions): RenderResult {
  requireColumns(table, CDF_SCHEMA, "cdf.csv");
  const floor = options.floor ?? DEFAULT_FLOOR;
  const warnings: string[] = [];
  const cSystem = col(table, "system");
  const cApp = col(table, "app");
  const cErr = col(table, "relative_error");
  const cFrac = col(table, "cumulative_fraction");

  interface Pt {
    logErr: number;
    frac: number;
  }
  const series = new Map<string, Map<string, Pt[]>>();
  const systems: string[] = [];
  for (const row of table.rows) {
    const err = num(row[cErr]);
    const frac = num(row[cFrac]);
    const system = row[cSystem];
    if (!systems.includes(system)) {
      systems.push(system);
    }
    if (!Number.isFinite(err) && err !== 0) {
      warnings.push(`skipping non-finite error for ${system}/${row[cApp]}`);
      continue;
    }
    const app = row[cApp];
    if (!series.has(app)) {
      series.set(app, new Map());
    }
    const perSystem = series.get(app)!;
    if (!perSystem.has(system)) {
      perSystem.set(system, []);
    }
    perSystem.get(system)!.push({ logErr: Math.log10(Math.max(err, floor)), frac });
  }
  if (series.size === 0) {
    throw new SchemaError("cdf.csv holds no plottable rows");
  }

  const width = options.width ?? 560;
  const innerW = width - MARGIN.left - MARGIN.right;
  const apps = [...series.keys()].sort();
  const height = MARGIN.top + apps.length * (PANEL_HEIGHT + PANEL_GAP) + MARGIN.bottom - PANEL_GAP;
  const body: string[] = [];

  apps.forEach((app, panelIndex) => {
    const top = MARGIN.top + panelIndex * (PANEL_HEIGHT + PANEL_GAP);
    const perSystem = series.get(app)!;
    const allX = [...perSystem.values()].flat().map((p) => p.logErr);
    const xLo = Math.floor(Math.min(...allX)) - 0.5;
    const xHi = Math.ceil(Math.max(...allX)) + 0.5;
    const x = linearScale([xLo, xHi], [MARGIN.left, MARGIN.left + innerW]);
    const y = linearScale([0, 1], [top + PANEL_HEIGHT, top]);

    body.push(el("text", { x: MARGIN.left, y: top - 10, "font-size": 13, "font-weight": "bold" }, [], app));
    for (const tick of decadeTicks(xLo, xHi)) {
      body.push(
        el("line", { x1: px(x(tick)), x2: px(x(tick)), y1: top, y2: top + PANEL_HEIGHT, stroke: "#eee" }),
        el(
          "text",
          { x: px(x(tick)), y: top + PANEL_HEIGHT + 14, "font-size": 9, "text-anchor": "middle" },
          [],
          `1e${tick}`
        )
      );
    }
    for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
      body.push(
        el("line", {
          x1: MARGIN.left, x2: MARGIN.left + innerW, y1: px(y(frac)), y2: px(y(frac)), stroke: "#eee",
        }),
        el(
          "text",
          { x: MARGIN.left - 8, y: px(y(frac) + 3), "font-size": 9, "text-anchor": "end" },
          [],
          frac.toFixed(2)
        )
      );
    }
    for (const [system, pts] of perSystem) {
      pts.sort((a, b) => a.logErr - b.logErr || a.frac - b.frac);
      const si = systems.indexOf(system);
      const points = pts.map((p) => `${px(x(p.logErr))},${px(y(p.frac))}`).join(" ");
      body.push(
        el("polyline", {
          points,
          fill: "none",
          stroke: colorFor(si),
          "stroke-width": 1.6,
          "data-system": system,
          "data-app": app,
          "data-fractions": pts.map((p) => p.frac).join(";"),
        })
      );
    }
  });

  body.push(...legend(systems, width));
  body.push(axisLabel("cumulative fraction of results", height));
  return { svg: svgDocument(width, height, body), warnings };
}

// ------------------------------------------------------------------- trace

const TRACE_SCHEMA = ["t", "exponent"];

function renderTrace(table: Table, options: FigureOptions): RenderResult {
  requireColumns(table, TRACE_SCHEMA, "trace.csv");
  if (table.rows.length === 0) {
    throw new SchemaError("trace.csv holds no rows");
  }
  const warnings: string[] = [];
  const pts = table.rows.map((row) => ({ t: Number(row[0]), e: Number(row[1]) }));

  const width = options.width ?? 640;
  const innerW = width - MARGIN.left - MARGIN.right;
  const height = MARGIN.top + PANEL_HEIGHT + MARGIN.bottom;
  const tLo = Math.min(...pts.map((p) => p.t));
  const tHi = Math.max(...pts.map((p) => p.t));
  // always keep the binary64 floor inside the frame
  const eLo = Math.min(...pts.map((p) => p.e), BINARY64_MIN_EXPONENT) - 40;
  const eHi = Math.max(...pts.map((p) => p.e), BINARY64_MIN_EXPONENT) + 40;
  const x = linearScale([tLo, tHi], [MARGIN.left, MARGIN.left + innerW]);
  const y = linearScale([eLo, eHi], [MARGIN.top + PANEL_HEIGHT, MARGIN.top]);

  const body: string[] = [];
  for (const tick of linearTicks(eLo, eHi)) {
    body.push(
      el("line", {
        x1: MARGIN.left, x2: MARGIN.left + innerW, y1: px(y(tick)), y2: px(y(tick)), stroke: "#eee",
      }),
      el("text", { x: MARGIN.left - 8, y: px(y(tick) + 3), "font-size": 9, "text-anchor": "end" }, [], `${tick}`)
    );
  }
  for (const tick of linearTicks(tLo, tHi)) {
    body.push(
      el("text", { x: px(x(tick)), y: MARGIN.top + PANEL_HEIGHT + 16, "font-size": 9, "text-anchor": "middle" }, [], `${tick}`)
    );
  }
  const refY = px(y(BINARY64_MIN_EXPONENT));
  body.push(
    el("line", {
      x1: MARGIN.left,
      x2: MARGIN.left + innerW,
      y1: refY,
      y2: refY,
      stroke: "#d62728",
      "stroke-dasharray": "5,4",
      "data-role": "binary64-floor",
      "data-exponent": BINARY64_MIN_EXPONENT,
    }),
    el(
      "text",
      { x: MARGIN.left + innerW, y: refY - 5, "font-size": 10, "text-anchor": "end", fill: "#d62728" },
      [],
      "smallest binary64 (2^-1074)"
    )
  );
  body.push(
    el("polyline", {
      points: pts.map((p) => `${px(x(p.t))},${px(y(p.e))}`).join(" "),
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": 1.6,
      "data-role": "trace",
    })
  );
  body.push(
    el("text", { x: px(MARGIN.left + innerW / 2), y: height - 8, "font-size": 11, "text-anchor": "middle" }, [], "iteration"),
    axisLabel("base-2 exponent of alpha", height)
  );
  return { svg: svgDocument(width, height, body), warnings };
}

// ----------------------------------------------------------------- shared

function legend(systems: string[], width: number): string[] {
  return systems.map((system, i) =>
    el("g", { "data-legend": system }, [
      el("rect", { x: width - MARGIN.right - 150, y: 12 + i * 14, width: 10, height: 10, fill: colorFor(i) }),
      el("text", { x: width - MARGIN.right - 136, y: 21 + i * 14, "font-size": 10 }, [], system),
    ])
  );
}

function axisLabel(label: string, height: number): string {
  return el(
    "text",
    {
      x: 14,
      y: px(height / 2),
      "font-size": 11,
      "text-anchor": "middle",
      transform: `rotate(-90 14 ${px(height / 2)})`,
    },
    [],
    label
  );
}
