/** Parsing for the sweep CSVs: one '#'-prefixed header line naming the
 * columns, then comma-separated numeric rows. */

export interface Table {
  columns: string[];
  rows: number[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvError("CSV is empty");
  }
  if (!lines[0].startsWith("#")) {
    throw new CsvError("missing '#'-prefixed header line");
  }
  const columns = lines[0]
    .replace(/^#\s*/, "")
    .split(",")
    .map((c) => c.trim());
  const rows: number[][] = [];
  for (const line of lines.slice(1)) {
    const values = line.split(",").map((v) => Number(v));
    if (values.length !== columns.length || values.some((v) => Number.isNaN(v))) {
      throw new CsvError(`malformed row: ${line}`);
    }
    rows.push(values);
  }
  if (rows.length === 0) {
    throw new CsvError("CSV has a header but no data rows");
  }
  return { columns, rows };
}

export function column(table: Table, name: string): number[] {
  const index = table.columns.indexOf(name);
  if (index < 0) {
    throw new CsvError(`column '${name}' not found (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[index]);
}
