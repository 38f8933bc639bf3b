/** Shared fixture builders: tiny synthetic sweep/run trees in temp dirs. */

import { createHash } from "crypto";
import { mkdir, mkdtemp, readdir, readFile, writeFile } from "fs/promises";
import { tmpdir } from "os";
import path from "path";

export async function tempDir(): Promise<string> {
  return mkdtemp(path.join(tmpdir(), "figgen-"));
}

/** A plausible bell-shaped profile; values only need to be plottable. */
export function densityCsv(nPoints = 9, peak = 0.2): string {
  const lines = ["x,rho_sim,rho_analytic,re_psi,im_psi"];
  const half = (nPoints - 1) / 2;
  for (let i = 0; i < nPoints; i++) {
    const x = i - half;
    const rho = peak * Math.exp((-x * x) / 4);
    lines.push(`${x},${rho},${rho * 1.01},${Math.sqrt(rho)},0`);
  }
  return lines.join("\n") + "\n";
}

export interface SweepFixtureOpts {
  epsilons?: number[];
  failing?: number[]; // marked ok:false in the manifest
  dropCsvFor?: number[]; // listed in the manifest but absent on disk
  schemaVersion?: number;
}

/** Mirrors the sweep layout the solver CLI writes: eps_* subdirs + manifest. */
export async function writeSweepFixture(
  dir: string,
  opts: SweepFixtureOpts = {}
): Promise<string> {
  const epsilons = opts.epsilons ?? [0, 0.02, 0.05, 0.2, 0.6, 1];
  const runs: unknown[] = [];
  for (const e of epsilons) {
    const tag = `eps_${e}`;
    if (opts.failing?.includes(e)) {
      runs.push({
        epsilon: e,
        dir: tag,
        ok: false,
        error: "grid too narrow: extent must cover both packets",
        manifest: null,
        final_csv: null,
        report: null,
      });
      continue;
    }
    const csvName = `${tag}/snapshot_t20.000000.csv`;
    if (!opts.dropCsvFor?.includes(e)) {
      await mkdir(path.join(dir, tag), { recursive: true });
      await writeFile(path.join(dir, csvName), densityCsv(9, 0.05 + e * 0.1));
    }
    runs.push({
      epsilon: e,
      dir: tag,
      ok: true,
      error: null,
      manifest: `${tag}/manifest.json`,
      final_csv: csvName,
      report: {
        epsilon: e,
        regime: e === 0 ? "singular-classical" : "standard",
        time: 20.0,
        dt_used: 0.0015,
        steps_taken: 13108,
        norm_drift_rel: 1e-9,
        linf_error_rel_peak: 0.001,
        l2_error: 0.0005,
        visibility_sim: 0.9,
        visibility_analytic: 0.9,
        max_classicality_term: 0.0,
      },
    });
  }
  const manifest = {
    schema_version: opts.schemaVersion ?? 1,
    command: "sweep",
    created_at: "2026-01-01T00:00:00+00:00",
    tool: { name: "qctransition", version: "0.1.0", scheme: "rk4-central2-dirichlet0" },
    config: {
      epsilons,
      d_over_sigma: 3.0,
      t_final_units: 20.0,
      grid_extent_over_sigma: 80.0,
      grid_points: 9,
      dt_safety: 0.5,
      amp_floor_rel: 1e-8,
      output_dir: dir,
      workers: 1,
      snapshot_times: null,
    },
    runs,
  };
  const manifestPath = path.join(dir, "sweep_manifest.json");
  await writeFile(manifestPath, JSON.stringify(manifest, null, 2) + "\n");
  return manifestPath;
}

/** Single-run manifest in the same dir as its snapshot CSVs. */
export async function writeSingleRunFixture(dir: string, epsilon = 0.2): Promise<string> {
  await writeFile(path.join(dir, "snapshot_t10.000000.csv"), densityCsv(9, 0.1));
  await writeFile(path.join(dir, "snapshot_t20.000000.csv"), densityCsv(9, 0.07));
  const manifest = {
    schema_version: 1,
    command: "simulate",
    created_at: "2026-01-01T00:00:00+00:00",
    tool: { name: "qctransition", version: "0.1.0", scheme: "rk4-central2-dirichlet0" },
    config: { epsilons: [epsilon], t_final_units: 20.0, d_over_sigma: 3.0, grid_points: 9 },
    results: {
      epsilon,
      regime: "standard",
      time: 20.0,
      snapshots: [
        { time: 10.0, csv: "snapshot_t10.000000.csv" },
        { time: 20.0, csv: "snapshot_t20.000000.csv" },
      ],
    },
  };
  const manifestPath = path.join(dir, "manifest.json");
  await writeFile(manifestPath, JSON.stringify(manifest, null, 2) + "\n");
  return manifestPath;
}

/** sha256 of every file under root, keyed by relative path. */
export async function treeChecksums(root: string): Promise<Map<string, string>> {
  const sums = new Map<string, string>();
  const entries = await readdir(root, { withFileTypes: true, recursive: true });
  for (const entry of entries) {
    if (!entry.isFile()) continue;
    const full = path.join(entry.parentPath, entry.name);
    const digest = createHash("sha256").update(await readFile(full)).digest("hex");
    sums.set(path.relative(root, full), digest);
  }
  return sums;
}
