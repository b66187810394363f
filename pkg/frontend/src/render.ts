#!/usr/bin/env node
/** CLI: render wavelab CSV tables into static SVG figures.
 *
 * Spec-file form:   wavelab-plots --spec figure.json
 * Flag form:        wavelab-plots --kind decay_loglog --csv run.csv --out fig.svg
 *
 * The spec file mirrors the flags:
 *   {"kind": "...", "csv": "run.csv" | ["a.csv", ...], "out": "fig.svg",
 *    "window": [10, 100]?}
 *
 * Rendering is read-only and deterministic: identical inputs produce a
 * byte-identical SVG.
 */

import { readFileSync, writeFileSync } from "fs";
import { parseCsv, Table } from "./csv.js";
import { RUN_COLUMNS, decayLoglog, mconvBar, prop21Scatter, ratioVsT, residualRefinement } from "./plots.js";

export interface PlotSpec {
  kind: string;
  csv: string | string[];
  out: string;
  window?: [number, number];
}

const KINDS = ["decay_loglog", "residual_refinement", "ratio_vs_t", "mconv_bar", "prop21_scatter"];

function loadTable(path: string, required: string[]): Table {
  return parseCsv(readFileSync(path, "utf8"), required);
}

export function renderSpec(spec: PlotSpec): string {
  const paths = Array.isArray(spec.csv) ? spec.csv : [spec.csv];
  if (paths.length === 0) {
    throw new Error("spec lists no input CSV");
  }
  switch (spec.kind) {
    case "decay_loglog":
      return decayLoglog(loadTable(paths[0], RUN_COLUMNS), spec.window);
    case "residual_refinement":
      return residualRefinement(paths.map((p) => loadTable(p, RUN_COLUMNS)));
    case "ratio_vs_t":
      return ratioVsT(loadTable(paths[0], RUN_COLUMNS));
    case "mconv_bar":
      return mconvBar(loadTable(paths[0], ["m", "sup_error"]));
    case "prop21_scatter":
      return prop21Scatter(loadTable(paths[0], ["sample_id", "lhs", "rhs", "ratio", "resolution", "L"]));
    default:
      throw new Error(`unknown plot kind '${spec.kind}' (expected one of ${KINDS.join(", ")})`);
  }
}

function parseArgs(argv: string[]): PlotSpec {
  const flags = new Map<string, string[]>();
  let key: string | null = null;
  for (const arg of argv) {
    if (arg.startsWith("--")) {
      key = arg.slice(2);
      flags.set(key, []);
    } else if (key) {
      flags.get(key)!.push(arg);
    } else {
      throw new Error(`unexpected argument '${arg}'`);
    }
  }
  if (flags.has("spec")) {
    const raw = JSON.parse(readFileSync(flags.get("spec")![0], "utf8"));
    if (!raw.kind || !raw.csv || !raw.out) {
      throw new Error("spec file needs kind, csv, and out");
    }
    return raw as PlotSpec;
  }
  const kind = flags.get("kind")?.[0];
  const csv = flags.get("csv") ?? [];
  const out = flags.get("out")?.[0];
  if (!kind || csv.length === 0 || !out) {
    throw new Error("usage: --spec spec.json | --kind KIND --csv FILE... --out FILE [--window a,b]");
  }
  const spec: PlotSpec = { kind, csv: csv.length === 1 ? csv[0] : csv, out };
  const win = flags.get("window")?.[0];
  if (win) {
    const [a, b] = win.split(",").map(Number);
    spec.window = [a, b];
  }
  return spec;
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const svg = renderSpec(spec);
    writeFileSync(spec.out, svg);
    console.log(`wrote ${spec.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

// invoked directly (not imported by tests)
if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
