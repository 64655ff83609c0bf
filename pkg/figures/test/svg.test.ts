import { describe, expect, it } from "vitest";

import { linePlot } from "../src/svg.js";

const base = {
  title: "demo",
  xLabel: "t",
  yLabel: "y",
  series: [{ label: "s", x: [0, 1, 2], y: [1, 4, 2] }],
};

describe("linePlot", () => {
  it("is deterministic byte-for-byte", () => {
    expect(linePlot(base)).toBe(linePlot(base));
  });

  it("contains no timestamps", () => {
    expect(linePlot(base)).not.toMatch(/\d{4}-\d{2}-\d{2}/);
  });

  it("renders polylines, bands and labels", () => {
    const svg = linePlot({
      ...base,
      bands: [{ y: 5, label: "bound 5" }],
    });
    expect(svg).toContain("<polyline");
    expect(svg).toContain("bound 5");
    expect(svg).toContain("demo");
  });

  it("drops nonpositive values on log scale", () => {
    const svg = linePlot({
      ...base,
      logY: true,
      series: [{ label: "s", x: [0, 1, 2, 3], y: [0, 1e-3, 1e-2, -1] }],
    });
    // only the two positive points survive
    const pts = svg.match(/<polyline points="([^"]+)"/)![1].split(" ");
    expect(pts).toHaveLength(2);
  });

  it("throws when nothing is plottable", () => {
    expect(() =>
      linePlot({ ...base, logY: true, series: [{ label: "s", x: [0], y: [-1] }] }),
    ).toThrow(/no plottable points/);
  });

  it("escapes markup in labels", () => {
    const svg = linePlot({ ...base, title: "a < b & c" });
    expect(svg).toContain("a &lt; b &amp; c");
  });
});
