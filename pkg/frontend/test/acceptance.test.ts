/**
 * End-to-end gate over the whole toolchain: a planted labeled capture goes
 * through the streaming side (pipeline generation, temporal split, feature
 * export) as subprocesses, and the resulting feature CSVs must classify at
 * AUC >= 0.95 in both train/test directions while a label-shuffled control
 * stays at the 0.5 null. Skipped when the `sal` binary is not on PATH.
 */

import { spawnSync } from "node:child_process";
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it, vi } from "vitest";
import { main } from "../src/cli.js";
import { trainEval } from "../src/evaluate.js";
import { FullReport } from "../src/report.js";
import { makeTmpDir, writePlantedCapture } from "./helpers.js";

const HAVE_SAL = spawnSync("sal", ["--help"], { encoding: "utf-8" }).status === 0;

const { dir, cleanup } = makeTmpDir("e2e");
afterAll(cleanup);

function sal(...args: string[]): void {
  const r = spawnSync("sal", args, { encoding: "utf-8", cwd: dir });
  expect(r.status, `sal ${args.join(" ")}\n${r.stderr}`).toBe(0);
}

const flows = join(dir, "flows.csv");
const p1 = join(dir, "p1.csv");
const p2 = join(dir, "p2.csv");
const f1 = join(dir, "f1.csv");
const f2 = join(dir, "f2.csv");

describe.skipIf(!HAVE_SAL)("planted-signal pipeline", () => {
  beforeAll(() => {
    writePlantedCapture(flows, { rows: 12_000, seed: 1234 });
    sal("gen-pipeline", "--window", "500", "-o", join(dir, "pipeline.sal"));
    sal("split", "--input", flows, "--out-first", p1, "--out-second", p2);
    sal("run", join(dir, "pipeline.sal"), "--input", p1, "--mode", "train", "--output", f1);
    sal("run", join(dir, "pipeline.sal"), "--input", p2, "--mode", "train", "--output", f2);
  });

  it("classifies the planted signal at AUC >= 0.95 in both directions", () => {
    const r = trainEval({ scenarios: [{ name: "planted", first: f1, second: f2 }], seed: 1 });
    expect(r.features.length).toBe(28);
    expect(r.scenarios[0].trainFirstTestSecond).toBeGreaterThanOrEqual(0.95);
    expect(r.scenarios[0].trainSecondTestFirst).toBeGreaterThanOrEqual(0.95);
  });

  it("label-shuffled control sits at 0.5 within 0.05", () => {
    const r = trainEval({
      scenarios: [{ name: "planted", first: f1, second: f2 }],
      seed: 1,
      shuffleLabels: true,
    });
    expect(Math.abs(r.meanAuc! - 0.5)).toBeLessThanOrEqual(0.05);
  });

  it("command line produces the report and table deterministically", () => {
    vi.spyOn(console, "log").mockImplementation(() => {});
    const run = (tag: string) => {
      const rpt = join(dir, `report-${tag}.json`);
      const tbl = join(dir, `table-${tag}.csv`);
      const code = main([
        "evaluate",
        "--first", f1, "--second", f2,
        "--name", "planted", "--seed", "1",
        "--report", rpt, "--table", tbl,
      ]);
      expect(code).toBe(0);
      return { rpt: readFileSync(rpt, "utf-8"), tbl: readFileSync(tbl, "utf-8") };
    };
    const a = run("a");
    const b = run("b");
    expect(a.rpt).toBe(b.rpt);
    expect(a.tbl).toBe(b.tbl);
    const report = JSON.parse(a.rpt) as FullReport;
    expect(report.scenarios[0].mean).toBeGreaterThanOrEqual(0.95);
    expect(a.tbl.split("\n")[1]).toMatch(/^planted,(0\.9[5-9]|1\.0)/);
    vi.restoreAllMocks();
  });
});
