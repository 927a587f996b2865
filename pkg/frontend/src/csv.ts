/**
 * Minimal CSV handling for the harness output files.
 *
 * The harness writes plain comma-separated values with a mandatory header
 * row and no quoting, so parsing is a straight split; what matters here is
 * strict schema validation before any drawing happens.
 */

export interface Table {
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`row ${i + 2} has ${cells.length} cells, expected ${header.length}`);
    }
    return cells;
  });
  return { header, rows };
}

export function requireColumns(table: Table, expected: string[], what: string): void {
  if (table.header.length !== expected.length || expected.some((c, i) => table.header[i] !== c)) {
    throw new SchemaError(
      `${what}: header [${table.header.join(",")}] does not match the ` +
        `required schema [${expected.join(",")}]`
    );
  }
}

export function col(table: Table, name: string): number {
  const i = table.header.indexOf(name);
  if (i < 0) {
    throw new SchemaError(`missing column ${name}`);
  }
  return i;
}

/** Parse a float cell; "inf"/"-inf"/"nan" come from the harness writers. */
export function num(cell: string): number {
  if (cell === "inf") return Infinity;
  if (cell === "-inf") return -Infinity;
  if (cell === "nan") return NaN;
  const v = Number(cell);
  if (cell === "" || Number.isNaN(v)) return NaN;
  return v;
}
