/**
 * Figure layout: pure data-to-coordinates mapping for the log-log error
 * panels. Rendering (svg.ts) only serializes this layout, so tests assert
 * on the plotted series here instead of on pixels.
 */

import type { Series } from "./series.js";

export interface LogScale {
  min: number;
  max: number;
  pxLo: number;
  pxHi: number;
}

export function scalePos(s: LogScale, value: number): number {
  const t = (Math.log10(value) - Math.log10(s.min)) / (Math.log10(s.max) - Math.log10(s.min));
  return s.pxLo + t * (s.pxHi - s.pxLo);
}

export interface PlottedPoint {
  tau: number;
  err: number;
  x: number;
  y: number;
}

export interface PlottedSeries {
  label: string;
  color: string;
  points: PlottedPoint[];
  /** blow-up markers, clipped to the top edge of the panel */
  infMarkers: { tau: number; x: number; y: number }[];
}

export interface Panel {
  x: LogScale;
  y: LogScale;
  series: PlottedSeries[];
  /** vertical guides at the resonant step sizes 2*pi*k/omega */
  guides: { tau: number; x: number; k: number }[];
  frame: { left: number; top: number; width: number; height: number };
}

export interface FigureSpec {
  series: Series[];
  omega?: number;
  zoom?: { tauLo: number; tauHi: number };
  width?: number;
  height?: number;
  title?: string;
  yLabel?: string;
}

export interface FigureLayout {
  width: number;
  height: number;
  main: Panel;
  inset?: Panel;
  title?: string;
  yLabel: string;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function dataBounds(series: Series[], tauLo?: number, tauHi?: number) {
  let tMin = Infinity;
  let tMax = 0;
  let eMin = Infinity;
  let eMax = 0;
  for (const s of series) {
    for (const p of s.points) {
      if (tauLo !== undefined && p.tau < tauLo) continue;
      if (tauHi !== undefined && p.tau > tauHi) continue;
      tMin = Math.min(tMin, p.tau);
      tMax = Math.max(tMax, p.tau);
      eMin = Math.min(eMin, p.err);
      eMax = Math.max(eMax, p.err);
    }
    for (const t of s.infTaus) {
      if (tauLo !== undefined && t < tauLo) continue;
      if (tauHi !== undefined && t > tauHi) continue;
      tMin = Math.min(tMin, t);
      tMax = Math.max(tMax, t);
    }
  }
  if (!(tMin < Infinity) || !(tMax > 0)) {
    throw new Error("no data rows inside the requested range");
  }
  return { tMin, tMax, eMin, eMax };
}

function buildPanel(
  series: Series[],
  frame: { left: number; top: number; width: number; height: number },
  omega?: number,
  tauLo?: number,
  tauHi?: number,
): Panel {
  const b = dataBounds(series, tauLo, tauHi);
  const padT = Math.pow(b.tMax / b.tMin, 0.03) || 1.05;
  const padE = Math.pow(Math.max(b.eMax / b.eMin, 10), 0.06);
  const x: LogScale = {
    min: (tauLo ?? b.tMin) / padT,
    max: (tauHi ?? b.tMax) * padT,
    pxLo: frame.left,
    pxHi: frame.left + frame.width,
  };
  const y: LogScale = {
    min: b.eMin / padE,
    max: b.eMax * padE,
    pxLo: frame.top + frame.height,
    pxHi: frame.top,
  };
  const plotted: PlottedSeries[] = series.map((s, i) => ({
    label: s.label,
    color: COLORS[i % COLORS.length],
    points: s.points
      .filter((p) => p.tau >= x.min && p.tau <= x.max)
      .map((p) => ({ tau: p.tau, err: p.err, x: scalePos(x, p.tau), y: scalePos(y, p.err) })),
    infMarkers: s.infTaus
      .filter((t) => t >= x.min && t <= x.max)
      .map((t) => ({ tau: t, x: scalePos(x, t), y: frame.top })),
  }));
  const guides: Panel["guides"] = [];
  if (omega && omega > 0) {
    for (let k = 1; ; k++) {
      const tau = (2 * Math.PI * k) / omega;
      if (tau > x.max) break;
      if (tau >= x.min) guides.push({ tau, x: scalePos(x, tau), k });
    }
  }
  return { x, y, series: plotted, guides, frame };
}

export function layoutFigure(spec: FigureSpec): FigureLayout {
  if (spec.series.length === 0) {
    throw new Error("figure needs at least one series");
  }
  const width = spec.width ?? 720;
  const height = spec.height ?? 480;
  const margin = { left: 64, right: 20, top: 28, bottom: 44 };
  const main = buildPanel(
    spec.series,
    {
      left: margin.left,
      top: margin.top,
      width: width - margin.left - margin.right,
      height: height - margin.top - margin.bottom,
    },
    spec.omega,
  );
  let inset: Panel | undefined;
  if (spec.zoom) {
    const w = Math.round(width * 0.34);
    const h = Math.round(height * 0.32);
    inset = buildPanel(
      spec.series,
      { left: width - margin.right - w - 12, top: margin.top + 12, width: w, height: h },
      spec.omega,
      spec.zoom.tauLo,
      spec.zoom.tauHi,
    );
  }
  return { width, height, main, inset, title: spec.title, yLabel: spec.yLabel ?? "error" };
}
