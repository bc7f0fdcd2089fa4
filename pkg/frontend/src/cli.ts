#!/usr/bin/env node
/**
 * Figure renderer for trajectory logs.
 *
 * Usage:
 *   vscmg-plot <trajectory.csv> [--figures all|rates,wheels,gimbals,quaternion] [--out DIR]
 */

import { FIGURE_SETS, FigureSet, PlotSpec, render } from "./figures.js";
import { SchemaError } from "./csv.js";

function usage(): void {
  console.error("usage: vscmg-plot <trajectory.csv> [--figures all|rates,wheels,gimbals,quaternion] [--out DIR]");
}

export function parseArgs(argv: string[]): PlotSpec | null {
  let csvPath: string | null = null;
  let outDir = "plots";
  let figures: PlotSpec["figures"] = "all";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--out") {
      outDir = argv[++i];
      if (outDir === undefined) return null;
    } else if (arg === "--figures") {
      const value = argv[++i];
      if (value === undefined) return null;
      if (value !== "all") {
        const parts = value.split(",").map((s) => s.trim()) as FigureSet[];
        for (const p of parts) {
          if (!(FIGURE_SETS as readonly string[]).includes(p)) {
            console.error(`unknown figure set '${p}'`);
            return null;
          }
        }
        figures = parts;
      }
    } else if (arg.startsWith("--")) {
      console.error(`unknown option '${arg}'`);
      return null;
    } else if (csvPath === null) {
      csvPath = arg;
    } else {
      return null;
    }
  }
  if (csvPath === null) return null;
  return { csvPath, outDir, figures };
}

export function main(argv: string[]): number {
  const spec = parseArgs(argv);
  if (spec === null) {
    usage();
    return 2;
  }
  try {
    const written = render(spec);
    for (const path of written) {
      console.log(path);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 3;
    }
    console.error(String(err));
    return 1;
  }
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
