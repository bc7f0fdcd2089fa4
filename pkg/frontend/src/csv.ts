/**
 * Trajectory-log CSV parsing.
 *
 * The harness writes one header row followed by one row per sampling
 * instant; every cell is a decimal number. Column lookups fail loudly with
 * the missing column's name so a schema drift is caught immediately.
 */

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  /** column name -> values, one entry per data row */
  data: Map<string, number[]>;
  rows: number;
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 1}: expected ${columns.length} cells, found ${cells.length} (truncated file?)`,
      );
    }
    for (let j = 0; j < columns.length; j++) {
      const value = Number(cells[j]);
      if (!Number.isFinite(value)) {
        throw new SchemaError(`row ${i + 1}, column '${columns[j]}': not a finite number`);
      }
      data.get(columns[j])!.push(value);
    }
  }
  return { columns, data, rows: lines.length - 1 };
}

export function column(table: Table, name: string): number[] {
  const values = table.data.get(name);
  if (values === undefined) {
    throw new SchemaError(`missing column '${name}'`);
  }
  return values;
}

/** Names like omega_s1, omega_s2, ... in index order; errors if none exist. */
export function numberedColumns(table: Table, prefix: string): string[] {
  const pattern = new RegExp(`^${prefix}(\\d+)$`);
  const found = table.columns
    .map((c) => pattern.exec(c))
    .filter((m): m is RegExpExecArray => m !== null)
    .sort((a, b) => Number(a[1]) - Number(b[1]))
    .map((m) => m[0]);
  if (found.length === 0) {
    throw new SchemaError(`missing column '${prefix}1'`);
  }
  return found;
}
