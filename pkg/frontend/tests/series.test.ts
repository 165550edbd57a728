import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseSweepCsv } from "../src/csv.js";
import { detectSpike, extractSeries, measureSlope } from "../src/series.js";

const OMEGA = 3000;
const CENTER = (2 * Math.PI) / OMEGA;

const fixtureTable = (name: string) =>
  parseSweepCsv(
    readFileSync(fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url)), "utf8"),
  );

function syntheticQuadratic(): string {
  const lines = ["tau,n_steps,err_x,blow_up"];
  for (let i = 0; i < 12; i++) {
    const tau = 1e-3 * Math.pow(10, i / 6);
    lines.push(`${tau},${Math.round(1 / tau)},${tau * tau},false`);
  }
  return lines.join("\n") + "\n";
}

describe("series extraction", () => {
  it("splits finite points from blow-up markers", () => {
    const table = parseSweepCsv("tau,n_steps,err_x,blow_up\n0.1,10,1e-3,false\n0.2,5,inf,true\n");
    const s = extractSeries(table, "err_x", "demo");
    expect(s.points.length).toBe(1);
    expect(s.infTaus).toEqual([0.2]);
  });

  it("rejects missing fields by name", () => {
    const table = parseSweepCsv(syntheticQuadratic());
    expect(() => extractSeries(table, "err_e", "demo")).toThrow(/err_e/);
  });
});

describe("measureSlope", () => {
  it("recovers the quadratic slope exactly", () => {
    const s = extractSeries(parseSweepCsv(syntheticQuadratic()), "err_x", "tau^2");
    expect(measureSlope(s)).toBeCloseTo(2.0, 6);
  });

  it("new-filter sweep is second order over the log range", () => {
    const s = extractSeries(fixtureTable("sweep_new.csv"), "err_e", "new");
    // restrict to the log-grid points (the zoom window samples one tau)
    const slope = measureSlope(s, 1e-3, 1e-2);
    expect(slope).toBeGreaterThan(1.8);
    expect(slope).toBeLessThan(2.2);
  });
});

describe("detectSpike", () => {
  const window = { lo: 0.9969 * CENTER, hi: 1.0031 * CENTER };

  it("flags the original filter's resonance spike", () => {
    const s = extractSeries(fixtureTable("sweep_orig.csv"), "err_e", "orig");
    const rep = detectSpike(s, window.lo, window.hi);
    expect(rep.spike).toBe(true);
    expect(rep.ratio).toBeGreaterThanOrEqual(10);
    // the peak sits inside the zoom window around the resonant step size
    expect(rep.peakTau).toBeGreaterThan(window.lo);
    expect(rep.peakTau).toBeLessThan(window.hi);
  });

  it("does not flag the second-order filter", () => {
    const s = extractSeries(fixtureTable("sweep_new.csv"), "err_e", "new");
    const rep = detectSpike(s, window.lo, window.hi);
    expect(rep.spike).toBe(false);
    expect(rep.ratio).toBeLessThan(3);
  });
});
