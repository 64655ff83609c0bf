/**
 * Strict numeric-CSV parsing for the simulator's output schema.
 *
 * Every error names the offending file and, where applicable, the missing
 * or malformed column, so schema drift upstream is caught loudly.
 */

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseNumericCsv(text: string, source = "csv"): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: empty CSV`);
  }
  if (lines.length === 1) {
    throw new Error(`${source}: header only, no data rows`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `${source}: row ${i} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    const row = cells.map((cell, j) => {
      const v = Number(cell);
      if (!Number.isFinite(v)) {
        throw new Error(`${source}: non-numeric value '${cell.trim()}' in column '${columns[j]}' (row ${i})`);
      }
      return v;
    });
    rows.push(row);
  }
  return { columns, rows };
}

export function columnIndex(table: Table, name: string, source = "csv"): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${source}: missing column '${name}' (have: ${table.columns.join(", ")})`);
  }
  return idx;
}

export function column(table: Table, name: string, source = "csv"): number[] {
  const idx = columnIndex(table, name, source);
  return table.rows.map((r) => r[idx]);
}

/** First column whose name starts with the prefix (e.g. "I_" for the
 * variance series of whichever weight profile the run carried). */
export function columnByPrefix(table: Table, prefix: string, source = "csv"): string {
  const hit = table.columns.find((c) => c.startsWith(prefix));
  if (!hit) {
    throw new Error(`${source}: no column starting with '${prefix}' (have: ${table.columns.join(", ")})`);
  }
  return hit;
}
