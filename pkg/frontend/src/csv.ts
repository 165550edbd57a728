/**
 * Parser for sweep CSVs produced by the oscsplit experiment harness.
 *
 * Schema: header `tau,n_steps,<error columns>,blow_up` where the error
 * columns are either err_p,err_e,err_b (three-field problems) or err_x
 * (wave problems). Floats are round-trip decimals; `inf` marks blow-ups.
 */

export interface SweepRow {
  tau: number;
  nSteps: number;
  /** error value per field, Infinity on blow-up rows */
  errors: Record<string, number>;
  blowUp: boolean;
}

export interface SweepTable {
  fields: string[];
  rows: SweepRow[];
}

export class CsvSchemaError extends Error {}

const KNOWN_FIELDS = new Set(["err_p", "err_e", "err_b", "err_x"]);

function parseFloatStrict(text: string, column: string, line: number): number {
  if (text === "inf") return Infinity;
  const v = Number(text);
  if (text.trim() === "" || Number.isNaN(v)) {
    throw new CsvSchemaError(
      `line ${line}: column ${column}: cannot parse ${JSON.stringify(text)} as a number`,
    );
  }
  return v;
}

export function parseSweepCsv(text: string): SweepTable {
  const lines = text.split(/\r?\n/).filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError("empty file, expected a sweep CSV header");
  }
  const header = lines[0].split(",");
  if (header[0] !== "tau" || header[1] !== "n_steps" || header[header.length - 1] !== "blow_up") {
    throw new CsvSchemaError(
      `unexpected header ${JSON.stringify(lines[0])}; expected tau,n_steps,<errors>,blow_up`,
    );
  }
  const fields = header.slice(2, -1);
  for (const f of fields) {
    if (!KNOWN_FIELDS.has(f)) {
      throw new CsvSchemaError(`unknown error column ${JSON.stringify(f)}`);
    }
  }
  if (fields.length === 0) {
    throw new CsvSchemaError("no error columns between n_steps and blow_up");
  }
  const rows: SweepRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new CsvSchemaError(
        `line ${i + 1}: expected ${header.length} columns, got ${parts.length}`,
      );
    }
    const errors: Record<string, number> = {};
    fields.forEach((f, k) => {
      errors[f] = parseFloatStrict(parts[2 + k], f, i + 1);
    });
    rows.push({
      tau: parseFloatStrict(parts[0], "tau", i + 1),
      nSteps: Math.round(parseFloatStrict(parts[1], "n_steps", i + 1)),
      errors,
      blowUp: parts[parts.length - 1] === "true",
    });
  }
  if (rows.length === 0) {
    throw new CsvSchemaError("no data rows");
  }
  rows.sort((a, b) => a.tau - b.tau);
  return { fields, rows };
}
