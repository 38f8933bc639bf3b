/**
 * SVG figure builder: a grid of density panels, one per quantumness
 * value, with the reference curve drawn solid and the simulated curve
 * drawn dotted on top. All panels share the x-axis (position in units
 * of the packet width); tick labels appear on the bottom row only.
 */

import type { DensityCurve } from "./csv.js";
import type { PanelSpec } from "./manifest.js";

export interface PanelData {
  spec: PanelSpec;
  curve: DensityCurve;
}

export interface FigureOpts {
  subtitle?: string;
}

// Styles for the two curves in every panel.
const REFERENCE = { color: "#c1272d", width: 1.1, cls: "ref" };
const SIMULATED = { color: "#1a1a1a", width: 1.3, cls: "sim", dash: "0.6,2.6" };

// ---------------------------------------------------------------------------
// SVG helpers
// ---------------------------------------------------------------------------

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const nice = [1, 2, 5, 10].map((m) => m * mag);
  const step = nice.find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

function fmtTick(v: number, step: number): string {
  if (v === 0) return "0";
  const digits = step >= 1 ? 0 : Math.min(4, Math.ceil(-Math.log10(step)));
  return v.toFixed(digits);
}

function fmtEpsilon(e: number): string {
  // trims trailing zeros: 0.02 -> "0.02", 1 -> "1"
  return String(e);
}

// ---------------------------------------------------------------------------
// Figure builder
// ---------------------------------------------------------------------------

export function renderFigure(panels: PanelData[], opts: FigureOpts = {}): string {
  if (panels.length === 0) {
    throw new Error("no panels to render");
  }

  // Layout: two columns once there are enough panels to warrant it.
  const cols = panels.length >= 4 ? 2 : 1;
  const rows = Math.ceil(panels.length / cols);
  const PW = 300; // plot box per panel
  const PH = 120;
  const ML = 56;
  const MT = 46;
  const MR = 18;
  const MB = 42;
  const GX = 58; // room for the right column's y labels
  const GY = 24;
  const W = ML + cols * PW + (cols - 1) * GX + MR;
  const H = MT + rows * PH + (rows - 1) * GY + MB;

  // Shared x range across all panels.
  const xMin = Math.min(...panels.map((p) => p.curve.x[0]));
  const xMax = Math.max(...panels.map((p) => p.curve.x[p.curve.x.length - 1]));
  const xTicks = niceTicks(xMin, xMax, 7);
  const xStep = xTicks.length > 1 ? xTicks[1] - xTicks[0] : 1;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;

  // Title, subtitle, legend
  s += `<text x="${ML}" y="16" font-size="10" font-weight="600" fill="#222">Probability density: simulated vs analytic</text>\n`;
  if (opts.subtitle) {
    s += `<text x="${ML}" y="27" font-size="7" fill="#888">${esc(opts.subtitle)}</text>\n`;
  }
  const lx = W - MR - 190;
  s += `<line x1="${lx}" y1="13" x2="${lx + 16}" y2="13" stroke="${REFERENCE.color}" stroke-width="${REFERENCE.width}"/>\n`;
  s += `<text x="${lx + 20}" y="16" font-size="7" fill="#444">analytic</text>\n`;
  s += `<line x1="${lx + 70}" y1="13" x2="${lx + 86}" y2="13" stroke="${SIMULATED.color}" stroke-width="${SIMULATED.width}" stroke-dasharray="${SIMULATED.dash}" stroke-linecap="round"/>\n`;
  s += `<text x="${lx + 90}" y="16" font-size="7" fill="#444">simulated</text>\n`;

  panels.forEach((panel, idx) => {
    const col = idx % cols;
    const row = Math.floor(idx / cols);
    const x0 = ML + col * (PW + GX);
    const y0 = MT + row * (PH + GY);
    const bottomRow = idx + cols >= panels.length;
    s += renderPanel(panel, idx, x0, y0, PW, PH, xMin, xMax, xTicks, xStep, bottomRow);
  });

  // Shared x-axis label, once, centered under the panel grid.
  const gridW = cols * PW + (cols - 1) * GX;
  s += `<text x="${ML + gridW / 2}" y="${H - 6}" text-anchor="middle" font-size="8.5" fill="#444">x / σ</text>\n`;

  s += `</svg>\n`;
  return s;
}

function renderPanel(
  panel: PanelData,
  idx: number,
  x0: number,
  y0: number,
  PW: number,
  PH: number,
  xMin: number,
  xMax: number,
  xTicks: number[],
  xStep: number,
  bottomRow: boolean
): string {
  const { spec, curve } = panel;
  const xOf = (v: number) => x0 + ((v - xMin) / (xMax - xMin || 1)) * PW;

  // y range is per panel: peaks differ strongly across the ladder
  const yMax = Math.max(...curve.rhoSim, ...curve.rhoAnalytic) * 1.12 || 1;
  const yOf = (v: number) => y0 + PH - (v / yMax) * PH;
  const yTicks = niceTicks(0, yMax, 3).filter((v) => v > 0);
  const yStep = yTicks.length > 0 ? yTicks[0] : yMax;

  let s = "";

  // Grid lines + frame
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${x0}" y1="${y.toFixed(1)}" x2="${x0 + PW}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.5"/>\n`;
  }
  s += `<defs><clipPath id="clip${idx}"><rect x="${x0}" y="${y0}" width="${PW}" height="${PH}"/></clipPath></defs>\n`;

  // Curves: solid reference first, dotted simulation on top
  const refPts = curve.x
    .map((xv, i) => `${xOf(xv).toFixed(1)},${yOf(curve.rhoAnalytic[i]).toFixed(1)}`)
    .join(" ");
  s += `<polyline class="${REFERENCE.cls}" clip-path="url(#clip${idx})" fill="none" stroke="${REFERENCE.color}" stroke-width="${REFERENCE.width}" points="${refPts}"/>\n`;
  const simPts = curve.x
    .map((xv, i) => `${xOf(xv).toFixed(1)},${yOf(curve.rhoSim[i]).toFixed(1)}`)
    .join(" ");
  s += `<polyline class="${SIMULATED.cls}" clip-path="url(#clip${idx})" fill="none" stroke="${SIMULATED.color}" stroke-width="${SIMULATED.width}" stroke-dasharray="${SIMULATED.dash}" stroke-linecap="round" points="${simPts}"/>\n`;

  // Frame: left + bottom axes
  s += `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y0 + PH}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${x0}" y1="${y0 + PH}" x2="${x0 + PW}" y2="${y0 + PH}" stroke="#333" stroke-width="0.7"/>\n`;

  // Panel tag and quantumness annotation
  s += `<text x="${x0 + 6}" y="${y0 + 11}" font-size="8" font-weight="600" fill="#222">${esc(spec.label)}</text>\n`;
  s += `<text x="${x0 + PW - 6}" y="${y0 + 11}" text-anchor="end" font-size="7.5" fill="#222">ε = ${esc(fmtEpsilon(spec.epsilon))}</text>\n`;

  // y ticks
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${x0 - 3}" y1="${y.toFixed(1)}" x2="${x0}" y2="${y.toFixed(1)}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x0 - 5}" y="${(y + 2.5).toFixed(1)}" text-anchor="end" font-size="6" fill="#666">${esc(fmtTick(v, yStep))}</text>\n`;
  }
  s += `<text x="${x0 - 40}" y="${y0 + PH / 2}" text-anchor="middle" font-size="7" fill="#444" transform="rotate(-90,${x0 - 40},${y0 + PH / 2})">|ψ|²</text>\n`;

  // x ticks on every panel; labels only on the bottom row (shared axis)
  for (const v of xTicks) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${y0 + PH}" x2="${x.toFixed(1)}" y2="${y0 + PH + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    if (bottomRow) {
      s += `<text x="${x.toFixed(1)}" y="${y0 + PH + 12}" text-anchor="middle" font-size="6.5" fill="#666">${esc(fmtTick(v, xStep))}</text>\n`;
    }
  }

  return s;
}
