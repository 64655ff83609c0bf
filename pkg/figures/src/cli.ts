#!/usr/bin/env node
/**
 * Render one figure from simulator outputs.
 *
 * Usage:
 *   node dist/cli.js --kind variance --input <run dir | manifest.json> --out fig.svg
 *   node dist/cli.js --kind growth|drift --input <run dir> --out fig.svg [--linear]
 *   node dist/cli.js --kind cutoff --input profile.csv --radius 10 [--family exterior|virial] --out fig.svg
 *   node dist/cli.js --kind groundstate --input Q.csv --out fig.svg
 */

import { parseArgs } from "node:util";

import { FigureKind, FigureSpec, render } from "./figures.js";

const KINDS: FigureKind[] = ["variance", "growth", "drift", "cutoff", "groundstate"];

export function main(argv: string[]): number {
  let values: Record<string, unknown>;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        input: { type: "string" },
        out: { type: "string" },
        column: { type: "string" },
        radius: { type: "string" },
        family: { type: "string" },
        linear: { type: "boolean", default: false },
      },
    }));
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  const kind = values.kind as string | undefined;
  if (!kind || !KINDS.includes(kind as FigureKind)) {
    console.error(`--kind must be one of: ${KINDS.join(", ")}`);
    return 1;
  }
  if (!values.input || !values.out) {
    console.error("--input and --out are required");
    return 1;
  }
  const family = values.family as string | undefined;
  if (family && family !== "exterior" && family !== "virial") {
    console.error("--family must be 'exterior' or 'virial'");
    return 1;
  }
  const spec: FigureSpec = {
    kind: kind as FigureKind,
    input: values.input as string,
    output: values.out as string,
    column: values.column as string | undefined,
    radius: values.radius !== undefined ? Number(values.radius) : undefined,
    family: family as FigureSpec["family"],
    linearY: Boolean(values.linear),
  };
  try {
    const path = render(spec);
    console.log(`wrote ${path}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

process.exit(main(process.argv.slice(2)));
