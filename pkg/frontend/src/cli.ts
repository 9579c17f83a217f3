import { writeFileSync } from "node:fs";
import { basename } from "node:path";
import process from "node:process";

import { SchemaError, readAggregate, readFront } from "./csv.js";
import { renderFrontPlot } from "./frontPlot.js";
import { renderHvPlot } from "./hvPlot.js";

const USAGE = `usage:
  mobokit-plots plot-hv    --out FIG.svg [--ref X,Y] [--no-band] AGG.csv[:label] ...
  mobokit-plots plot-front --out FIG.svg [--ref X,Y] FRONT.csv

Inputs are mobokit CSVs (aggregate.csv / front_<k>.csv). Output format is
selected by the --out extension; only .svg is supported.`;

interface ParsedArgs {
  out: string;
  ref?: [number, number];
  band: boolean;
  inputs: string[];
}

function parseArgs(argv: string[]): ParsedArgs {
  const args: ParsedArgs = { out: "", band: true, inputs: [] };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--out") {
      args.out = argv[++i] ?? "";
    } else if (a === "--ref") {
      const parts = (argv[++i] ?? "").split(",").map(Number);
      if (parts.length !== 2 || parts.some(Number.isNaN)) {
        throw new Error(`--ref expects "X,Y", got "${argv[i]}"`);
      }
      args.ref = [parts[0], parts[1]];
    } else if (a === "--no-band") {
      args.band = false;
    } else if (a.startsWith("--")) {
      throw new Error(`unknown flag ${a}`);
    } else {
      args.inputs.push(a);
    }
  }
  if (!args.out) throw new Error("--out is required");
  if (!args.out.endsWith(".svg")) {
    throw new Error(`unsupported output extension for "${args.out}": use .svg`);
  }
  if (args.inputs.length === 0) throw new Error("need at least one input CSV");
  return args;
}

function splitLabel(input: string): [string, string] {
  const sep = input.lastIndexOf(":");
  if (sep > 1) {
    // allow drive-less "path:label"; a bare path has no colon past index 1
    return [input.slice(0, sep), input.slice(sep + 1)];
  }
  return [input, basename(input).replace(/\.csv$/, "")];
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === "plot-hv") {
      const args = parseArgs(rest);
      const series = args.inputs.map((inp) => {
        const [path, label] = splitLabel(inp);
        return readAggregate(path, label);
      });
      writeFileSync(args.out, renderHvPlot(series, { band: args.band, ref: args.ref }));
      console.log(`wrote ${args.out} (${series.length} series)`);
      return 0;
    }
    if (command === "plot-front") {
      const args = parseArgs(rest);
      if (args.inputs.length !== 1) throw new Error("plot-front takes exactly one CSV");
      const points = readFront(args.inputs[0]);
      writeFileSync(args.out, renderFrontPlot(points, { ref: args.ref }));
      console.log(`wrote ${args.out} (${points.length} points)`);
      return 0;
    }
    console.error(USAGE);
    return 2;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof Error) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const isDirect = process.argv[1] !== undefined &&
  import.meta.url.endsWith(basename(process.argv[1]));
if (isDirect) {
  process.exit(main(process.argv.slice(2)));
}
