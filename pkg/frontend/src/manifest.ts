/**
 * Manifest reader: turns a solver run manifest (JSON) into a list of
 * panel specs, one per quantumness value, sorted ascending.
 *
 * Two manifest flavors are accepted: a sweep manifest (several runs,
 * each in its own subdirectory) and a single-run manifest. Data files
 * are resolved relative to the manifest location and must exist before
 * any rendering starts; every missing path is reported, not just the
 * first one.
 */

import { readFile, stat } from "fs/promises";
import path from "path";

export const SUPPORTED_SCHEMA_VERSION = 1;

const PANEL_TAGS = "abcdefghijklmnopqrstuvwxyz";

/** One panel of the final figure: where the data lives and how to tag it. */
export interface PanelSpec {
  csvPath: string;
  epsilon: number;
  label: string; // "(a)", "(b)", ... assigned after the ascending sort
}

export interface FigureJob {
  panels: PanelSpec[];
  warnings: string[]; // failed runs that were skipped
  subtitle: string;
}

interface RawEntry {
  epsilon: number;
  csv: string;
}

export async function loadFigureJob(manifestPath: string): Promise<FigureJob> {
  let raw: string;
  try {
    raw = await readFile(manifestPath, "utf-8");
  } catch (err) {
    throw new Error(`cannot read ${manifestPath}: ${(err as Error).message}`);
  }
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch (err) {
    throw new Error(`${manifestPath}: invalid JSON: ${(err as Error).message}`);
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new Error(`${manifestPath}: manifest must be a JSON object`);
  }
  const m = data as Record<string, unknown>;
  if (m.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new Error(
      `${manifestPath}: unsupported schema_version ${JSON.stringify(m.schema_version)}` +
        ` (expected ${SUPPORTED_SCHEMA_VERSION})`
    );
  }

  const warnings: string[] = [];
  let entries: RawEntry[];
  if (m.command === "sweep") {
    entries = sweepEntries(m, manifestPath, warnings);
  } else if (m.command === "simulate") {
    entries = [singleRunEntry(m, manifestPath)];
  } else {
    throw new Error(
      `${manifestPath}: cannot render command ${JSON.stringify(m.command)}` +
        ` (expected "sweep" or "simulate")`
    );
  }
  if (entries.length === 0) {
    throw new Error(`${manifestPath}: no successful runs to render`);
  }

  entries.sort((a, b) => a.epsilon - b.epsilon);
  const base = path.dirname(path.resolve(manifestPath));
  const panels: PanelSpec[] = entries.map((e, i) => ({
    csvPath: path.resolve(base, e.csv),
    epsilon: e.epsilon,
    label: `(${PANEL_TAGS[i % PANEL_TAGS.length]})`,
  }));

  const missing: string[] = [];
  for (const p of panels) {
    try {
      await stat(p.csvPath);
    } catch {
      missing.push(p.csvPath);
    }
  }
  if (missing.length > 0) {
    const plural = missing.length === 1 ? "" : "s";
    throw new Error(`missing data file${plural}:\n  ${missing.join("\n  ")}`);
  }

  return { panels, warnings, subtitle: subtitleFrom(m) };
}

function sweepEntries(
  m: Record<string, unknown>,
  manifestPath: string,
  warnings: string[]
): RawEntry[] {
  const runs = m.runs;
  if (!Array.isArray(runs)) {
    throw new Error(`${manifestPath}: sweep manifest has no "runs" array`);
  }
  const entries: RawEntry[] = [];
  for (const run of runs) {
    if (typeof run !== "object" || run === null) {
      throw new Error(`${manifestPath}: malformed run entry`);
    }
    const r = run as Record<string, unknown>;
    if (typeof r.epsilon !== "number") {
      throw new Error(`${manifestPath}: run entry without numeric "epsilon"`);
    }
    if (r.ok !== true) {
      warnings.push(`skipping failed run eps=${r.epsilon}: ${r.error ?? "unknown error"}`);
      continue;
    }
    if (typeof r.final_csv !== "string") {
      throw new Error(`${manifestPath}: run eps=${r.epsilon} has no "final_csv"`);
    }
    entries.push({ epsilon: r.epsilon, csv: r.final_csv });
  }
  return entries;
}

function singleRunEntry(m: Record<string, unknown>, manifestPath: string): RawEntry {
  const results = m.results;
  if (typeof results !== "object" || results === null) {
    throw new Error(`${manifestPath}: single-run manifest has no "results" object`);
  }
  const r = results as Record<string, unknown>;
  if (typeof r.epsilon !== "number") {
    throw new Error(`${manifestPath}: results block without numeric "epsilon"`);
  }
  const snaps = r.snapshots;
  if (!Array.isArray(snaps) || snaps.length === 0) {
    throw new Error(`${manifestPath}: results block has no snapshots`);
  }
  // the final snapshot is the one the run manifest reports metrics for
  const last = snaps[snaps.length - 1] as Record<string, unknown>;
  if (typeof last.csv !== "string") {
    throw new Error(`${manifestPath}: snapshot entry without "csv" path`);
  }
  return { epsilon: r.epsilon, csv: last.csv };
}

function subtitleFrom(m: Record<string, unknown>): string {
  const cfg = (typeof m.config === "object" && m.config !== null ? m.config : {}) as Record<
    string,
    unknown
  >;
  const parts: string[] = [];
  if (typeof cfg.t_final_units === "number") {
    parts.push(`t = ${cfg.t_final_units} mσ²/ħ`);
  }
  if (typeof cfg.d_over_sigma === "number") {
    parts.push(`d = ${cfg.d_over_sigma}σ`);
  }
  if (typeof cfg.grid_points === "number") {
    parts.push(`${cfg.grid_points} grid points`);
  }
  return parts.join("  ·  ");
}
