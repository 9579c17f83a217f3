import { readFileSync } from "node:fs";

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

/** Parse a plain comma-separated file (no quoting in mobokit CSVs). */
export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV (missing header row)");
  }
  const [head, ...rest] = lines;
  return { header: head.split(","), rows: rest.map((ln) => ln.split(",")) };
}

export function readCsv(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Column indices for the given names; names a missing column on failure. */
export function requireColumns(table: CsvTable, names: string[], source: string): number[] {
  return names.map((name) => {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(`${source}: missing column "${name}" (found: ${table.header.join(", ")})`);
    }
    return idx;
  });
}

function parseNumber(raw: string, source: string, line: number): number {
  const v = Number(raw);
  if (raw.trim() === "" || Number.isNaN(v)) {
    throw new SchemaError(`${source}:${line}: not a number: "${raw}"`);
  }
  return v;
}

export interface AggregateSeries {
  label: string;
  iter: number[];
  hvMean: number[];
  hvStd: number[];
}

/** Aggregate CSV schema: iter, hv_mean, hv_std. */
export function readAggregate(path: string, label: string): AggregateSeries {
  const table = readCsv(path);
  const [ci, cm, cs] = requireColumns(table, ["iter", "hv_mean", "hv_std"], path);
  const series: AggregateSeries = { label, iter: [], hvMean: [], hvStd: [] };
  table.rows.forEach((row, k) => {
    series.iter.push(parseNumber(row[ci], path, k + 2));
    series.hvMean.push(parseNumber(row[cm], path, k + 2));
    series.hvStd.push(parseNumber(row[cs], path, k + 2));
  });
  if (series.iter.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return series;
}

export interface FrontPoint {
  mean: [number, number];
  std: [number, number];
}

/** Front CSV schema: mean_1, mean_2, std_1, std_2 (x_* columns ignored). */
export function readFront(path: string): FrontPoint[] {
  const table = readCsv(path);
  const [m1, m2, s1, s2] = requireColumns(
    table, ["mean_1", "mean_2", "std_1", "std_2"], path);
  return table.rows.map((row, k) => ({
    mean: [parseNumber(row[m1], path, k + 2), parseNumber(row[m2], path, k + 2)],
    std: [parseNumber(row[s1], path, k + 2), parseNumber(row[s2], path, k + 2)],
  }));
}
