/**
 * Data series extracted from sweep tables, plus the measurements the tests
 * assert on: least-squares slope on log-log axes and resonance spike
 * detection against a local background level.
 */

import type { SweepTable } from "./csv.js";

export interface Series {
  label: string;
  /** finite data points, ascending tau */
  points: { tau: number; err: number }[];
  /** tau values whose error is infinite (blow-up rows, drawn top-clipped) */
  infTaus: number[];
}

export function extractSeries(table: SweepTable, field: string, label: string): Series {
  if (!table.fields.includes(field)) {
    throw new Error(
      `field ${JSON.stringify(field)} not in CSV (has ${table.fields.join(", ")})`,
    );
  }
  const points: { tau: number; err: number }[] = [];
  const infTaus: number[] = [];
  for (const row of table.rows) {
    const err = row.errors[field];
    if (Number.isFinite(err) && err > 0) {
      points.push({ tau: row.tau, err });
    } else {
      infTaus.push(row.tau);
    }
  }
  return { label, points, infTaus };
}

/** Least-squares slope of log(err) versus log(tau) over [tauMin, tauMax]. */
export function measureSlope(series: Series, tauMin?: number, tauMax?: number): number {
  const pts = series.points.filter(
    (p) => (tauMin === undefined || p.tau >= tauMin) && (tauMax === undefined || p.tau <= tauMax),
  );
  if (pts.length < 2) {
    throw new Error(`need at least 2 points to fit a slope, got ${pts.length}`);
  }
  const xs = pts.map((p) => Math.log(p.tau));
  const ys = pts.map((p) => Math.log(p.err));
  const xm = xs.reduce((a, b) => a + b, 0) / xs.length;
  const ym = ys.reduce((a, b) => a + b, 0) / ys.length;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < xs.length; i++) {
    sxx += (xs[i] - xm) ** 2;
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  return sxy / sxx;
}

function median(values: number[]): number {
  const v = [...values].sort((a, b) => a - b);
  const m = Math.floor(v.length / 2);
  return v.length % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

export interface SpikeReport {
  /** true when some point in the window rises >= factor over the background */
  spike: boolean;
  peakTau: number;
  peakErr: number;
  background: number;
  ratio: number;
}

/**
 * Spike detector on the data series (not on pixels): compares the peak
 * error inside the window [tauLo, tauHi] against the median error of the
 * series outside it but within `pad` decades of the window (the local
 * off-resonance background).
 */
export function detectSpike(
  series: Series,
  tauLo: number,
  tauHi: number,
  factor = 10,
  pad = 0.5,
): SpikeReport {
  const inWin = series.points.filter((p) => p.tau >= tauLo && p.tau <= tauHi);
  const near = series.points.filter(
    (p) =>
      (p.tau < tauLo || p.tau > tauHi) &&
      Math.abs(Math.log10(p.tau) - Math.log10(Math.sqrt(tauLo * tauHi))) <= pad,
  );
  if (inWin.length === 0 || near.length === 0) {
    throw new Error("spike detection needs points both inside and outside the window");
  }
  const peak = inWin.reduce((a, b) => (b.err > a.err ? b : a));
  const background = median(near.map((p) => p.err));
  const ratio = peak.err / background;
  return { spike: ratio >= factor, peakTau: peak.tau, peakErr: peak.err, background, ratio };
}
