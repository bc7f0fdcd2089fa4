import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { SchemaError, parseCsv } from "../src/csv.js";
import { FIGURE_SETS, render, renderFigure } from "../src/figures.js";
import { main, parseArgs } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");
const PAPER_CSV = join(FIXTURES, "paper_s4_short.csv");
const EQUILIBRIUM_CSV = join(FIXTURES, "equilibrium.csv");

function freshDir(): string {
  return mkdtempSync(join(tmpdir(), "vscmg-plots-"));
}

describe("render", () => {
  it("emits all four figure sets from a scenario log", () => {
    const out = freshDir();
    const written = render({ csvPath: PAPER_CSV, outDir: out, figures: "all" });
    expect(written).toHaveLength(4);
    for (const path of written) {
      const svg = readFileSync(path, "utf-8");
      expect(svg).toContain("<svg");
      expect(svg).toContain("polyline");
      expect(svg).toContain("time [s]");
    }
    expect(written.map((p) => p.split("/").pop())).toEqual(
      ["body_rates.svg", "wheel_speeds.svg", "gimbal_speeds.svg", "quaternion.svg"],
    );
  });

  it("renders flat zero traces for an equilibrium log", () => {
    const table = parseCsv(readFileSync(EQUILIBRIUM_CSV, "utf-8"));
    for (const set of FIGURE_SETS) {
      const svg = renderFigure(table, set);
      // every sampled value is zero, so each polyline must be a single
      // horizontal line: exactly one distinct y coordinate
      const points = svg.match(/points="([^"]+)"/g) ?? [];
      expect(points.length).toBeGreaterThan(0);
      for (const chunk of points) {
        const ys = new Set(
          chunk.replace(/points="|"/g, "")
            .split(" ")
            .map((pair) => pair.split(",")[1]),
        );
        expect(ys.size).toBe(1);
      }
    }
  });

  it("is idempotent: same bytes in, same bytes out", () => {
    const out1 = freshDir();
    const out2 = freshDir();
    const first = render({ csvPath: PAPER_CSV, outDir: out1, figures: ["rates"] });
    const second = render({ csvPath: PAPER_CSV, outDir: out2, figures: ["rates"] });
    expect(readFileSync(first[0], "utf-8")).toBe(readFileSync(second[0], "utf-8"));
  });

  it("raises SchemaError on a log missing required columns", () => {
    const out = freshDir();
    const bad = join(out, "bad.csv");
    writeFileSync(bad, "t,omega1,omega2\n0,0,0\n");
    expect(() => render({ csvPath: bad, outDir: out, figures: ["rates"] }))
      .toThrow(/missing column 'omega3'/);
    expect(() => render({ csvPath: bad, outDir: out, figures: ["wheels"] }))
      .toThrow(SchemaError);
  });

  it("raises SchemaError on a truncated log", () => {
    const out = freshDir();
    const full = readFileSync(PAPER_CSV, "utf-8");
    const bad = join(out, "truncated.csv");
    writeFileSync(bad, full.slice(0, full.length - 40));
    expect(() => render({ csvPath: bad, outDir: out, figures: "all" })).toThrow(SchemaError);
  });
});

describe("cli", () => {
  it("parses arguments", () => {
    const spec = parseArgs([PAPER_CSV, "--figures", "rates,wheels", "--out", "somewhere"]);
    expect(spec).not.toBeNull();
    expect(spec!.figures).toEqual(["rates", "wheels"]);
    expect(spec!.outDir).toBe("somewhere");
    expect(parseArgs([])).toBeNull();
    expect(parseArgs([PAPER_CSV, "--figures", "bogus"])).toBeNull();
  });

  it("runs end to end and reports schema problems via exit code", () => {
    const out = freshDir();
    expect(main([PAPER_CSV, "--figures", "all", "--out", out])).toBe(0);
    const bad = join(out, "bad.csv");
    writeFileSync(bad, "t,omega1\n0,0\n");
    expect(main([bad, "--out", out])).toBe(3);
    expect(main([])).toBe(2);
  });
});
