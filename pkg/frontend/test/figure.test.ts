import { describe, expect, it } from "vitest";

import { niceTicks, renderFigure, type PanelData } from "../src/figure.js";

function panel(epsilon: number, label: string, peak = 0.1): PanelData {
  const x: number[] = [];
  const rhoSim: number[] = [];
  const rhoAnalytic: number[] = [];
  for (let i = 0; i <= 8; i++) {
    const xv = i - 4;
    const rho = peak * Math.exp((-xv * xv) / 4);
    x.push(xv);
    rhoSim.push(rho);
    rhoAnalytic.push(rho * 1.02);
  }
  return { spec: { csvPath: `/data/${label}.csv`, epsilon, label }, curve: { x, rhoSim, rhoAnalytic } };
}

const LADDER = [0, 0.02, 0.05, 0.2, 0.6, 1].map((e, i) =>
  panel(e, `(${"abcdef"[i]})`, 0.05 + e * 0.1)
);

describe("renderFigure", () => {
  it("draws one solid and one dotted curve per panel", () => {
    const svg = renderFigure(LADDER);
    const lines = svg.split("\n");
    const ref = lines.filter((l) => l.includes('class="ref"'));
    const sim = lines.filter((l) => l.includes('class="sim"'));
    expect(ref).toHaveLength(6);
    expect(sim).toHaveLength(6);
    for (const l of ref) expect(l).not.toContain("stroke-dasharray");
    for (const l of sim) expect(l).toContain("stroke-dasharray");
  });

  it("orders panel tags and epsilon annotations ascending", () => {
    const svg = renderFigure(LADDER);
    const tagPositions = ["(a)", "(b)", "(c)", "(d)", "(e)", "(f)"].map((t) => svg.indexOf(t));
    for (const pos of tagPositions) expect(pos).toBeGreaterThan(-1);
    for (let i = 1; i < tagPositions.length; i++) {
      expect(tagPositions[i]).toBeGreaterThan(tagPositions[i - 1]);
    }
    // "<" anchors the annotation end so "= 0" cannot match "= 0.02"
    const annPositions = [0, 0.02, 0.05, 0.2, 0.6, 1].map((e) =>
      svg.indexOf(`ε = ${e}<`)
    );
    for (const pos of annPositions) expect(pos).toBeGreaterThan(-1);
    for (let i = 1; i < annPositions.length; i++) {
      expect(annPositions[i]).toBeGreaterThan(annPositions[i - 1]);
    }
  });

  it("labels the shared x axis exactly once", () => {
    const svg = renderFigure(LADDER);
    expect(svg.match(/x \/ σ/g)).toHaveLength(1);
  });

  it("puts x tick labels on the bottom row only", () => {
    const svg = renderFigure(LADDER);
    const ticks = niceTicks(-4, 4, 7);
    // x tick labels are the only 6.5pt text; 2 columns on the bottom row
    const labels = svg.match(/font-size="6\.5"/g) ?? [];
    expect(labels).toHaveLength(2 * ticks.length);
  });

  it("renders a single panel without extra tags", () => {
    const svg = renderFigure([panel(0.2, "(a)")]);
    expect(svg).toContain("(a)");
    expect(svg).not.toContain("(b)");
    expect(svg.match(/class="ref"/g)).toHaveLength(1);
    expect(svg.match(/class="sim"/g)).toHaveLength(1);
  });

  it("is deterministic", () => {
    expect(renderFigure(LADDER, { subtitle: "t = 20" })).toBe(
      renderFigure(LADDER, { subtitle: "t = 20" })
    );
  });

  it("rejects an empty panel list", () => {
    expect(() => renderFigure([])).toThrow("no panels to render");
  });
});

describe("niceTicks", () => {
  it("covers the range with round steps", () => {
    expect(niceTicks(-4, 4, 7)).toEqual([-4, -2, 0, 2, 4]);
  });

  it("returns increasing values", () => {
    const ticks = niceTicks(0, 0.173, 3);
    for (let i = 1; i < ticks.length; i++) {
      expect(ticks[i]).toBeGreaterThan(ticks[i - 1]);
    }
    expect(ticks[ticks.length - 1]).toBeLessThanOrEqual(0.173 * 1.01);
  });
});
