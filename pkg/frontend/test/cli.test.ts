import { readFile } from "fs/promises";
import path from "path";
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { run } from "../src/cli.js";
import {
  tempDir,
  treeChecksums,
  writeSingleRunFixture,
  writeSweepFixture,
} from "./helpers.js";

let logs: string[];
let errs: string[];

beforeEach(() => {
  logs = [];
  errs = [];
  vi.spyOn(console, "log").mockImplementation((...a: unknown[]) => {
    logs.push(a.join(" "));
  });
  vi.spyOn(console, "error").mockImplementation((...a: unknown[]) => {
    errs.push(a.join(" "));
  });
});

afterEach(() => {
  vi.restoreAllMocks();
});

describe("figgen cli", () => {
  it("renders a six-panel figure from a sweep manifest", async () => {
    const dir = await tempDir();
    const manifest = await writeSweepFixture(dir);
    const out = path.join(dir, "fig.svg");
    expect(await run([manifest, "-o", out])).toBe(0);
    const svg = await readFile(out, "utf-8");
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).toContain("(f)");
    expect(logs.join("\n")).toContain("6 panels");
  });

  it("never modifies its inputs", async () => {
    const dir = await tempDir();
    const manifest = await writeSweepFixture(dir);
    const before = await treeChecksums(dir);
    const outside = await tempDir();
    expect(await run([manifest, "--output", path.join(outside, "fig.svg")])).toBe(0);
    const after = await treeChecksums(dir);
    expect(after).toEqual(before);
  });

  it("renders a one-panel figure from a single-run manifest", async () => {
    const dir = await tempDir();
    const manifest = await writeSingleRunFixture(dir);
    const out = path.join(dir, "fig.svg");
    expect(await run([manifest, "-o", out])).toBe(0);
    expect(logs.join("\n")).toContain("1 panel");
    const svg = await readFile(out, "utf-8");
    expect(svg).toContain("(a)");
    expect(svg).not.toContain("(b)");
  });

  it("exits nonzero listing every missing csv", async () => {
    const dir = await tempDir();
    const manifest = await writeSweepFixture(dir, {
      epsilons: [0, 0.2, 1],
      dropCsvFor: [0.2, 1],
    });
    expect(await run([manifest, "-o", path.join(dir, "fig.svg")])).toBe(1);
    const text = errs.join("\n");
    expect(text).toContain("missing data files");
    expect(text).toContain(path.join(dir, "eps_0.2"));
    expect(text).toContain(path.join(dir, "eps_1"));
  });

  it("warns about failed runs but still renders the rest", async () => {
    const dir = await tempDir();
    const manifest = await writeSweepFixture(dir, { epsilons: [0, 0.2, 1], failing: [0] });
    const out = path.join(dir, "fig.svg");
    expect(await run([manifest, "-o", out])).toBe(0);
    expect(errs.join("\n")).toContain("skipping failed run eps=0");
    expect(logs.join("\n")).toContain("2 panels");
  });

  it("rejects an unsupported schema version", async () => {
    const dir = await tempDir();
    const manifest = await writeSweepFixture(dir, { epsilons: [0.2], schemaVersion: 2 });
    expect(await run([manifest])).toBe(1);
    expect(errs.join("\n")).toContain("unsupported schema_version 2");
  });

  it("treats bad usage as a usage error", async () => {
    expect(await run([])).toBe(2);
    expect(await run(["--nope"])).toBe(2);
    expect(await run(["a.json", "b.json"])).toBe(2);
    expect(await run(["a.json", "-o"])).toBe(2);
    expect(errs.join("\n")).toContain("usage: figgen");
  });

  it("prints usage on --help", async () => {
    expect(await run(["--help"])).toBe(0);
    expect(logs.join("\n")).toContain("usage: figgen");
  });
});
