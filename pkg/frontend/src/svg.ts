/**
 * SVG serialization of a figure layout. No timestamps, no randomness: the
 * output is a pure function of the layout.
 */

import type { FigureLayout, LogScale, Panel } from "./figure.js";
import { scalePos } from "./figure.js";

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmtTick(v: number): string {
  const e = Math.round(Math.log10(v));
  return `1e${e}`;
}

function* decades(s: LogScale): Generator<number> {
  const lo = Math.ceil(Math.log10(s.min));
  const hi = Math.floor(Math.log10(s.max));
  for (let e = lo; e <= hi; e++) yield Math.pow(10, e);
}

function panelSvg(p: Panel, showTicks: boolean): string {
  const parts: string[] = [];
  const f = p.frame;
  parts.push(
    `<rect x="${f.left}" y="${f.top}" width="${f.width}" height="${f.height}" ` +
      `fill="white" stroke="#444" stroke-width="1"/>`,
  );
  for (const tick of decades(p.x)) {
    const x = scalePos(p.x, tick);
    parts.push(
      `<line x1="${x.toFixed(2)}" y1="${f.top}" x2="${x.toFixed(2)}" ` +
        `y2="${f.top + f.height}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    if (showTicks) {
      parts.push(
        `<text x="${x.toFixed(2)}" y="${f.top + f.height + 16}" font-size="11" ` +
          `text-anchor="middle" fill="#222">${fmtTick(tick)}</text>`,
      );
    }
  }
  for (const tick of decades(p.y)) {
    const y = scalePos(p.y, tick);
    parts.push(
      `<line x1="${f.left}" y1="${y.toFixed(2)}" x2="${f.left + f.width}" ` +
        `y2="${y.toFixed(2)}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    if (showTicks) {
      parts.push(
        `<text x="${f.left - 6}" y="${(y + 4).toFixed(2)}" font-size="11" ` +
          `text-anchor="end" fill="#222">${fmtTick(tick)}</text>`,
      );
    }
  }
  for (const g of p.guides) {
    parts.push(
      `<line x1="${g.x.toFixed(2)}" y1="${f.top}" x2="${g.x.toFixed(2)}" ` +
        `y2="${f.top + f.height}" stroke="#999" stroke-width="0.8" stroke-dasharray="4 3"/>`,
    );
  }
  for (const s of p.series) {
    if (s.points.length > 0) {
      const path = s.points.map((q) => `${q.x.toFixed(2)},${q.y.toFixed(2)}`).join(" ");
      parts.push(
        `<polyline points="${path}" fill="none" stroke="${s.color}" stroke-width="1.4"/>`,
      );
      for (const q of s.points) {
        parts.push(
          `<circle cx="${q.x.toFixed(2)}" cy="${q.y.toFixed(2)}" r="2.2" fill="${s.color}"/>`,
        );
      }
    }
    for (const m of s.infMarkers) {
      // blow-up rows: top-clipped open triangles
      const x = m.x;
      const y = m.y + 6;
      parts.push(
        `<path d="M ${(x - 4).toFixed(2)} ${y.toFixed(2)} L ${(x + 4).toFixed(2)} ` +
          `${y.toFixed(2)} L ${x.toFixed(2)} ${(y - 6).toFixed(2)} Z" ` +
          `fill="none" stroke="${s.color}" stroke-width="1.2"/>`,
      );
    }
  }
  return parts.join("\n");
}

export function renderSvg(layout: FigureLayout): string {
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${layout.width}" ` +
      `height="${layout.height}" viewBox="0 0 ${layout.width} ${layout.height}">`,
  );
  parts.push(`<rect width="${layout.width}" height="${layout.height}" fill="white"/>`);
  if (layout.title) {
    parts.push(
      `<text x="${layout.width / 2}" y="18" font-size="14" text-anchor="middle" ` +
        `fill="#111">${esc(layout.title)}</text>`,
    );
  }
  parts.push(panelSvg(layout.main, true));
  const f = layout.main.frame;
  parts.push(
    `<text x="${f.left + f.width / 2}" y="${layout.height - 8}" font-size="12" ` +
      `text-anchor="middle" fill="#111">step size</text>`,
  );
  parts.push(
    `<text x="16" y="${f.top + f.height / 2}" font-size="12" text-anchor="middle" ` +
      `fill="#111" transform="rotate(-90 16 ${f.top + f.height / 2})">${esc(layout.yLabel)}</text>`,
  );
  // legend
  layout.main.series.forEach((s, i) => {
    const y = f.top + 14 + 16 * i;
    parts.push(
      `<line x1="${f.left + 10}" y1="${y}" x2="${f.left + 34}" y2="${y}" ` +
        `stroke="${s.color}" stroke-width="2"/>`,
    );
    parts.push(
      `<text x="${f.left + 40}" y="${y + 4}" font-size="11" fill="#111">${esc(s.label)}</text>`,
    );
  });
  if (layout.inset) {
    parts.push(panelSvg(layout.inset, false));
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
