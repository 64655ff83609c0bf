import { describe, expect, it } from "vitest";

import { column, columnByPrefix, parseNumericCsv } from "../src/csv.js";

describe("parseNumericCsv", () => {
  it("parses a numeric table", () => {
    const t = parseNumericCsv("a,b\n1,2\n3,4.5\n");
    expect(t.columns).toEqual(["a", "b"]);
    expect(t.rows).toEqual([[1, 2], [3, 4.5]]);
  });

  it("rejects empty input", () => {
    expect(() => parseNumericCsv("", "x.csv")).toThrow(/x\.csv: empty CSV/);
    expect(() => parseNumericCsv("\n\n", "x.csv")).toThrow(/empty CSV/);
  });

  it("rejects header-only input", () => {
    expect(() => parseNumericCsv("a,b\n", "x.csv")).toThrow(/no data rows/);
  });

  it("names the offending column on bad cells", () => {
    expect(() => parseNumericCsv("a,b\n1,oops\n", "x.csv")).toThrow(/column 'b'/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseNumericCsv("a,b\n1\n", "x.csv")).toThrow(/row 1 has 1 cells/);
  });
});

describe("column access", () => {
  const t = parseNumericCsv("t,I_0,I_5\n0,1,2\n1,3,4\n");

  it("extracts by name", () => {
    expect(column(t, "I_5")).toEqual([2, 4]);
  });

  it("names missing columns", () => {
    expect(() => column(t, "M", "x.csv")).toThrow(/missing column 'M'/);
  });

  it("finds the first prefixed column", () => {
    expect(columnByPrefix(t, "I_")).toBe("I_0");
    expect(() => columnByPrefix(t, "hs_", "x.csv")).toThrow(/no column starting with 'hs_'/);
  });
});
