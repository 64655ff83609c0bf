/**
 * Figure renderers over the simulator's run outputs.
 *
 * Inputs are consumed strictly through the published file formats
 * (trajectory.csv, virial_*.csv, criterion_report.json, manifest.json,
 * profile CSVs); nothing is recomputed from physics.  All validation
 * happens before any output file is written.
 */

import { mkdirSync, readFileSync, renameSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { statSync } from "node:fs";

import { Table, column, columnByPrefix, parseNumericCsv } from "./csv.js";
import { Band, Series, linePlot } from "./svg.js";

export type FigureKind = "variance" | "growth" | "drift" | "cutoff" | "groundstate";

export interface FigureSpec {
  kind: FigureKind;
  /** run directory, manifest.json path, or (cutoff/groundstate) profile CSV */
  input: string;
  output: string;
  /** trajectory column override for the variance series */
  column?: string;
  /** cutoff radius R, required for the cutoff kind's constraint bands */
  radius?: number;
  /** cutoff family: exterior (phi' vs 4/R) or virial (phi'' vs 2) */
  family?: "exterior" | "virial";
  linearY?: boolean;
}

interface RunFiles {
  trajectory: string;
  report: string;
}

function isDirectory(path: string): boolean {
  try {
    return statSync(path).isDirectory();
  } catch {
    return false;
  }
}

/** Locate trajectory + criterion report from a run directory or its manifest. */
export function resolveRunFiles(input: string): RunFiles {
  const dir = input.endsWith("manifest.json") ? dirname(input) : input;
  if (!isDirectory(dir)) {
    throw new Error(`input '${input}' is not a run directory or manifest path`);
  }
  const manifestPath = join(dir, "manifest.json");
  let names: string[];
  try {
    const manifest = JSON.parse(readFileSync(manifestPath, "utf8"));
    names = (manifest.files as { name: string }[]).map((f) => f.name);
  } catch (err) {
    throw new Error(`cannot read run manifest at ${manifestPath}: ${(err as Error).message}`);
  }
  const need = (name: string): string => {
    if (!names.includes(name)) {
      throw new Error(`run manifest at ${manifestPath} does not list ${name}`);
    }
    return join(dir, name);
  };
  return { trajectory: need("trajectory.csv"), report: need("criterion_report.json") };
}

function readTable(path: string): Table {
  return parseNumericCsv(readFileSync(path, "utf8"), path);
}

function writeAtomic(path: string, text: string): void {
  mkdirSync(dirname(path) || ".", { recursive: true });
  const tmp = path + ".tmp";
  writeFileSync(tmp, text);
  renameSync(tmp, path);
}

export function renderVariance(spec: FigureSpec): string {
  const files = resolveRunFiles(spec.input);
  const table = readTable(files.trajectory);
  const report = JSON.parse(readFileSync(files.report, "utf8"));
  const g = report.glassey;
  if (!g || typeof g.variance0 !== "number" || typeof g.energy !== "number") {
    throw new Error(`${files.report}: missing glassey section (variance0, variance_rate0, energy)`);
  }
  const t = column(table, "t", files.trajectory);
  const colName = spec.column ?? columnByPrefix(table, "I_", files.trajectory);
  const v = column(table, colName, files.trajectory);
  const parabola = t.map((ti) => g.variance0 + g.variance_rate0 * ti + 4 * g.energy * ti * ti);
  let maxRel = 0;
  for (let i = 0; i < t.length; i++) {
    maxRel = Math.max(maxRel, Math.abs(v[i] - parabola[i]) / Math.abs(parabola[i]));
  }
  const svg = linePlot({
    title: "Variance vs analytic parabola",
    subtitle: `max relative residual ${maxRel.toExponential(2)}`
      + (g.bound_time ? `; variance-root bound t = ${Number(g.bound_time).toPrecision(4)}` : ""),
    xLabel: "t",
    yLabel: "V(t)",
    series: [
      { label: `measured ${colName}`, x: t, y: v, width: 2.4 },
      { label: "V0 + V'0 t + 4 E t^2", x: t, y: parabola, dash: "6 5", color: "#d1495b" },
    ],
  });
  writeAtomic(spec.output, svg);
  return spec.output;
}

export function renderGrowth(spec: FigureSpec): string {
  const files = resolveRunFiles(spec.input);
  const table = readTable(files.trajectory);
  const t = column(table, "t", files.trajectory);
  const series: Series[] = [
    { label: "|grad u|_L2", x: t, y: column(table, "grad_l2", files.trajectory) },
    { label: "|u|_inf", x: t, y: column(table, "linf", files.trajectory) },
  ];
  for (const name of table.columns) {
    if (name.startsWith("hs_") || name.startsWith("lq_")) {
      series.push({ label: name, x: t, y: column(table, name, files.trajectory) });
    }
  }
  const svg = linePlot({
    title: "Norm growth",
    xLabel: "t",
    yLabel: "monitored norms",
    series,
    logY: !spec.linearY,
  });
  writeAtomic(spec.output, svg);
  return spec.output;
}

export function renderDrift(spec: FigureSpec): string {
  const files = resolveRunFiles(spec.input);
  const table = readTable(files.trajectory);
  const t = column(table, "t", files.trajectory);
  const m = column(table, "M", files.trajectory);
  const e = column(table, "E", files.trajectory);
  // exact zeros (t = 0, or drift below round-off) sit on the 1e-18 floor so
  // the log axis always has something to show
  const floor = spec.linearY ? 0 : 1e-18;
  const rel = (xs: number[]) =>
    xs.map((x) => Math.max(Math.abs(x - xs[0]) / Math.abs(xs[0]), floor));
  const svg = linePlot({
    title: "Conservation drift",
    xLabel: "t",
    yLabel: "relative drift",
    series: [
      { label: "|M - M0| / M0", x: t, y: rel(m) },
      { label: "|E - E0| / |E0|", x: t, y: rel(e) },
    ],
    logY: !spec.linearY,
  });
  writeAtomic(spec.output, svg);
  return spec.output;
}

export function renderCutoff(spec: FigureSpec): string {
  const table = readTable(spec.input);
  if (spec.radius === undefined || !(spec.radius > 0)) {
    throw new Error("cutoff figure needs --radius R to draw the constraint band");
  }
  const r = column(table, "r", spec.input);
  const family = spec.family ?? "exterior";
  let series: Series[];
  let bands: Band[];
  let yLabel: string;
  if (family === "exterior") {
    series = [{ label: "phi'", x: r, y: column(table, "dphi", spec.input), width: 2.2 }];
    bands = [{ y: 4 / spec.radius, label: `bound 4/R = ${(4 / spec.radius).toPrecision(4)}` }];
    yLabel = "phi'(r)";
  } else {
    series = [{ label: "phi''", x: r, y: column(table, "d2phi", spec.input), width: 2.2 }];
    bands = [{ y: 2, label: "bound 2" }];
    yLabel = "phi''(r)";
  }
  const svg = linePlot({
    title: `${family} cutoff constraint (R = ${spec.radius})`,
    xLabel: "r",
    yLabel,
    series,
    bands,
  });
  writeAtomic(spec.output, svg);
  return spec.output;
}

export function renderGroundstate(spec: FigureSpec): string {
  const table = readTable(spec.input);
  const r = column(table, "r", spec.input);
  const q = column(table, "Q", spec.input);
  const svg = linePlot({
    title: "Ground-state profile",
    xLabel: "r",
    yLabel: "Q(r)",
    series: [{ label: "Q", x: r, y: q, width: 2.2 }],
  });
  writeAtomic(spec.output, svg);
  return spec.output;
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "variance":
      return renderVariance(spec);
    case "growth":
      return renderGrowth(spec);
    case "drift":
      return renderDrift(spec);
    case "cutoff":
      return renderCutoff(spec);
    case "groundstate":
      return renderGroundstate(spec);
    default:
      throw new Error(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
}
