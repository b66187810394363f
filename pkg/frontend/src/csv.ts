/** Strict numeric CSV parsing for the wavelab table schemas. */

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string, required: string[] = []): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length < 2) {
    throw new Error("CSV has no data rows");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new Error(`CSV is missing required column '${col}'`);
    }
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${i + 1} has ${parts.length} fields, expected ${columns.length}`);
    }
    const row = parts.map((p) => Number(p));
    if (row.some((v) => Number.isNaN(v))) {
      throw new Error(`row ${i + 1} contains a non-numeric field`);
    }
    rows.push(row);
  }
  return { columns, rows };
}

export function column(table: Table, name: string): number[] {
  const j = table.columns.indexOf(name);
  if (j < 0) {
    throw new Error(`CSV is missing required column '${name}'`);
  }
  return table.rows.map((r) => r[j]);
}
