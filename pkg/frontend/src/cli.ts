#!/usr/bin/env node
/**
 * Render oscsplit sweep CSVs as a log-log SVG error figure.
 *
 * Usage:
 *   oscsplit-plot --csv sweep_a.csv:labelA --csv sweep_b.csv:labelB \
 *       [--field err_e] [--omega 3000] [--zoom lo:hi] --out fig.svg
 *
 * --zoom takes absolute step sizes lo:hi and adds an inset panel over that
 * window. Exit code 1 on schema or usage errors, with the offending column
 * or flag named.
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { CsvSchemaError, parseSweepCsv } from "./csv.js";
import { layoutFigure } from "./figure.js";
import { extractSeries } from "./series.js";
import { renderSvg } from "./svg.js";

interface Args {
  csvs: { path: string; label: string }[];
  field?: string;
  omega?: number;
  zoom?: { tauLo: number; tauHi: number };
  out?: string;
  title?: string;
}

class UsageError extends Error {}

function parseArgs(argv: string[]): Args {
  const args: Args = { csvs: [] };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const need = (): string => {
      if (i + 1 >= argv.length) throw new UsageError(`${flag}: missing value`);
      return argv[++i];
    };
    switch (flag) {
      case "--csv": {
        const spec = need();
        const sep = spec.lastIndexOf(":");
        if (sep <= 0 || sep === spec.length - 1) {
          throw new UsageError(`--csv: expected path:label, got ${JSON.stringify(spec)}`);
        }
        args.csvs.push({ path: spec.slice(0, sep), label: spec.slice(sep + 1) });
        break;
      }
      case "--field":
        args.field = need();
        break;
      case "--omega":
        args.omega = Number(need());
        if (!(args.omega > 0)) throw new UsageError("--omega: expected a positive number");
        break;
      case "--zoom": {
        const parts = need().split(":").map(Number);
        if (parts.length !== 2 || parts.some((v) => !(v > 0)) || parts[0] >= parts[1]) {
          throw new UsageError("--zoom: expected lo:hi with 0 < lo < hi");
        }
        args.zoom = { tauLo: parts[0], tauHi: parts[1] };
        break;
      }
      case "--out":
        args.out = need();
        break;
      case "--title":
        args.title = need();
        break;
      default:
        throw new UsageError(`unknown flag ${JSON.stringify(flag)}`);
    }
  }
  if (args.csvs.length === 0) throw new UsageError("need at least one --csv path:label");
  if (!args.out) throw new UsageError("--out is required");
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const series = args.csvs.map(({ path, label }) => {
      const table = parseSweepCsv(readFileSync(path, "utf8"));
      const field = args.field ?? (table.fields.includes("err_e") ? "err_e" : table.fields[0]);
      return extractSeries(table, field, label);
    });
    const layout = layoutFigure({
      series,
      omega: args.omega,
      zoom: args.zoom,
      title: args.title,
      yLabel: args.field ?? "error",
    });
    writeFileSync(args.out!, renderSvg(layout));
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
