#!/usr/bin/env node
/**
 * figgen — render a multi-panel density figure from a solver manifest.
 *
 * Usage:
 *   figgen <sweep_manifest.json> [-o figure.svg]
 *
 * Reads the manifest plus the CSV files it references and writes one
 * SVG. Inputs are never modified. Exit codes: 0 ok, 1 data error,
 * 2 usage error.
 */

import { readFile, writeFile } from "fs/promises";
import { pathToFileURL } from "url";

import { parseDensityCsv } from "./csv.js";
import { renderFigure, type PanelData } from "./figure.js";
import { loadFigureJob } from "./manifest.js";

const USAGE = "usage: figgen <sweep_manifest.json> [-o output.svg]";

export async function run(argv: string[]): Promise<number> {
  let manifestPath: string | null = null;
  let output = "figure.svg";

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-h" || arg === "--help") {
      console.log(USAGE);
      console.log("\nRenders solid analytic and dotted simulated density curves,");
      console.log("one panel per quantumness value, sorted ascending.");
      return 0;
    } else if (arg === "-o" || arg === "--output") {
      const value = argv[++i];
      if (value === undefined) {
        console.error(`figgen: ${arg} needs a file name`);
        console.error(USAGE);
        return 2;
      }
      output = value;
    } else if (arg.startsWith("-")) {
      console.error(`figgen: unknown option ${arg}`);
      console.error(USAGE);
      return 2;
    } else if (manifestPath === null) {
      manifestPath = arg;
    } else {
      console.error("figgen: too many arguments");
      console.error(USAGE);
      return 2;
    }
  }
  if (manifestPath === null) {
    console.error(USAGE);
    return 2;
  }

  try {
    const job = await loadFigureJob(manifestPath);
    for (const w of job.warnings) {
      console.error(`figgen: warning: ${w}`);
    }
    const panels: PanelData[] = [];
    for (const spec of job.panels) {
      const text = await readFile(spec.csvPath, "utf-8");
      panels.push({ spec, curve: parseDensityCsv(text, spec.csvPath) });
    }
    const svg = renderFigure(panels, { subtitle: job.subtitle });
    await writeFile(output, svg);
    const n = panels.length;
    console.log(`figure -> ${output} (${n} panel${n === 1 ? "" : "s"})`);
    return 0;
  } catch (err) {
    console.error(`figgen: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  run(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
