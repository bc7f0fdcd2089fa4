/**
 * Figure sets over a trajectory log: body rates, wheel speeds, gimbal
 * speeds, and the attitude quaternion components, each as one SVG line
 * chart with time on the horizontal axis.
 */

import { readFileSync, writeFileSync, mkdirSync } from "fs";
import { join } from "path";

import { SchemaError, Table, column, numberedColumns, parseCsv } from "./csv.js";
import { lineChart, Series } from "./svg.js";

export const FIGURE_SETS = ["rates", "wheels", "gimbals", "quaternion"] as const;
export type FigureSet = (typeof FIGURE_SETS)[number];

export interface PlotSpec {
  csvPath: string;
  outDir: string;
  figures: FigureSet[] | "all";
}

interface FigureDef {
  file: string;
  title: string;
  yLabel: string;
  columns: (table: Table) => string[];
}

const DEFS: Record<FigureSet, FigureDef> = {
  rates: {
    file: "body_rates.svg",
    title: "Spacecraft body rate response",
    yLabel: "body rate [rad/s]",
    columns: () => ["omega1", "omega2", "omega3"],
  },
  wheels: {
    file: "wheel_speeds.svg",
    title: "Spin wheel response",
    yLabel: "wheel speed [rad/s]",
    columns: (table) => numberedColumns(table, "omega_s"),
  },
  gimbals: {
    file: "gimbal_speeds.svg",
    title: "Gimbal rate response",
    yLabel: "gimbal rate [rad/s]",
    columns: (table) => numberedColumns(table, "omega_g"),
  },
  quaternion: {
    file: "quaternion.svg",
    title: "Attitude quaternion response",
    yLabel: "quaternion component [-]",
    columns: () => ["q1", "q2", "q3"],
  },
};

export function renderFigure(table: Table, which: FigureSet): string {
  const def = DEFS[which];
  const t = column(table, "t");
  const series: Series[] = def.columns(table).map((name) => ({
    name,
    x: t,
    y: column(table, name),
  }));
  return lineChart(series, { title: def.title, xLabel: "time [s]", yLabel: def.yLabel });
}

/** Render the requested figure sets; returns the written file paths. */
export function render(spec: PlotSpec): string[] {
  const sets: FigureSet[] = spec.figures === "all" ? [...FIGURE_SETS] : spec.figures;
  for (const s of sets) {
    if (!(s in DEFS)) {
      throw new SchemaError(`unknown figure set '${s}'`);
    }
  }
  const table = parseCsv(readFileSync(spec.csvPath, "utf-8"));
  mkdirSync(spec.outDir, { recursive: true });
  const written: string[] = [];
  for (const s of sets) {
    const svg = renderFigure(table, s);
    const path = join(spec.outDir, DEFS[s].file);
    writeFileSync(path, svg);
    written.push(path);
  }
  return written;
}
