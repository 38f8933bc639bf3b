/**
 * Parser for the density snapshot CSVs written by the solver CLI.
 *
 * The file contract is a fixed header plus 17-significant-digit floats;
 * only the columns needed for plotting are kept.
 */

export const DENSITY_HEADER = "x,rho_sim,rho_analytic,re_psi,im_psi";

export interface DensityCurve {
  x: number[];
  rhoSim: number[];
  rhoAnalytic: number[];
}

export function parseDensityCsv(text: string, source: string): DensityCurve {
  const lines = text.split("\n");
  // tolerate a single trailing newline
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new Error(`${source}: empty file`);
  }
  if (lines[0].trim() !== DENSITY_HEADER) {
    throw new Error(
      `${source}, line 1: expected header "${DENSITY_HEADER}", got "${lines[0].trim()}"`
    );
  }
  const x: number[] = [];
  const rhoSim: number[] = [];
  const rhoAnalytic: number[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== 5) {
      throw new Error(`${source}, line ${i + 1}: expected 5 fields, got ${fields.length}`);
    }
    const xi = Number(fields[0]);
    const rs = Number(fields[1]);
    const ra = Number(fields[2]);
    if (!Number.isFinite(xi) || !Number.isFinite(rs) || !Number.isFinite(ra)) {
      throw new Error(`${source}, line ${i + 1}: non-numeric value`);
    }
    x.push(xi);
    rhoSim.push(rs);
    rhoAnalytic.push(ra);
  }
  if (x.length < 2) {
    throw new Error(`${source}: need at least 2 data rows, got ${x.length}`);
  }
  return { x, rhoSim, rhoAnalytic };
}
