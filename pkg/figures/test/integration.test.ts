/**
 * End-to-end rendering on real simulator outputs, when present.
 *
 * demos/02_blowup_variance.py (in the repository root) produces the
 * blow-up run these figures consume; the suite skips cleanly when it has
 * not been generated.
 */

import { existsSync, readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { render } from "../src/figures.js";

const RUN = join(__dirname, "..", "..", "demos", "out", "blowup");
const CUTOFFS = join(__dirname, "..", "..", "demos", "out", "cutoffs");
const OUT = join(__dirname, "..", "..", "demos", "out", "figures");

const haveRun = existsSync(join(RUN, "manifest.json"));
const haveCutoff = existsSync(join(CUTOFFS, "exterior_R10.csv"));

describe.skipIf(!haveRun)("real blow-up run", () => {
  it("renders variance, growth and drift within the time budget", () => {
    const t0 = Date.now();
    render({ kind: "variance", input: RUN, output: join(OUT, "variance.svg") });
    render({ kind: "growth", input: RUN, output: join(OUT, "growth.svg") });
    render({ kind: "drift", input: RUN, output: join(OUT, "drift.svg") });
    const elapsed = (Date.now() - t0) / 1000;
    expect(elapsed).toBeLessThan(10);

    const svg = readFileSync(join(OUT, "variance.svg"), "utf8");
    const rel = Number(svg.match(/max relative residual ([0-9.e+-]+)/)![1]);
    expect(rel).toBeLessThan(1e-6);
    expect(svg).toContain("variance-root bound");
  });
});

describe.skipIf(!haveCutoff)("real cutoff export", () => {
  it("renders phi' under its band", () => {
    render({
      kind: "cutoff",
      input: join(CUTOFFS, "exterior_R10.csv"),
      output: join(OUT, "cutoff_exterior.svg"),
      radius: 10,
      family: "exterior",
    });
    expect(readFileSync(join(OUT, "cutoff_exterior.svg"), "utf8")).toContain("bound 4/R");
  });
});
