import { readFileSync } from "node:fs";

export interface Table {
  path: string;
  header: string[];
  columns: Map<string, number[]>;
  rows: number;
}

/** Parse one of the solver's CSV files (comma separator, header row, LF). */
export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`empty CSV: ${path}`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const columns = new Map<string, number[]>(header.map((h) => [h, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(`${path}:${i + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    for (let c = 0; c < header.length; c++) {
      const value = Number(parts[c]);
      if (Number.isNaN(value)) {
        throw new Error(`${path}:${i + 1}: non-numeric value "${parts[c]}"`);
      }
      columns.get(header[c])!.push(value);
    }
  }
  const rows = lines.length - 1;
  if (rows === 0) {
    throw new Error(`CSV has a header but no data rows: ${path}`);
  }
  return { path, header, columns, rows };
}

/** Fetch a column or fail naming it, per the plotting error contract. */
export function column(table: Table, name: string): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new Error(`column "${name}" not found in ${table.path}`);
  }
  return col;
}
