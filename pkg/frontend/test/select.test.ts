import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";
import { mulberry32 } from "../src/rng.js";
import { GAIN_EPSILON, greedySelect } from "../src/select.js";
import { FeatureRow, makeTmpDir, writeFeatureCsv } from "./helpers.js";

const { dir, cleanup } = makeTmpDir("select");
afterAll(cleanup);

// one informative feature among noise; optional exact duplicate of it
function makeScenario(name: string, featureNames: string[], informative: number[], n: number, seed: number) {
  const rng = mulberry32(seed);
  const make = (rows: number): FeatureRow[] =>
    Array.from({ length: rows }, () => {
      const malicious = rng() < 0.5;
      const cells = featureNames.map((_, f) =>
        informative.includes(f) ? (malicious ? 2 : 0) + rng() * 0.4 : rng(),
      );
      // duplicates must be byte-identical, not freshly sampled
      for (let f = 1; f < informative.length; f++) cells[informative[f]] = cells[informative[0]];
      return { features: cells, label: malicious ? ("malicious" as const) : ("benign" as const) };
    });
  const first = join(dir, `${name}-1.csv`);
  const second = join(dir, `${name}-2.csv`);
  writeFeatureCsv(first, featureNames, make(n));
  writeFeatureCsv(second, featureNames, make(n));
  return { name, first, second };
}

const OPTS = { trees: 15, seed: 5 };

describe("greedySelect", () => {
  it("picks the informative feature first among noise", () => {
    const names = ["N1", "N2", "N3", "Sig", "N4", "N5", "N6", "N7", "N8", "N9"];
    const sc = makeScenario("informative", names, [3], 300, 1);
    const { selected, trace } = greedySelect(names, { scenarios: [sc], ...OPTS });
    expect(selected[0]).toBe("Sig");
    expect(trace[0].feature).toBe("Sig");
    expect(trace[0].meanAuc).toBeGreaterThan(0.95);
  });

  it("selects exactly one of an identical duplicate pair, by input order", () => {
    const names = ["CopyA", "CopyB"];
    const sc = makeScenario("dup", names, [0, 1], 300, 2);
    const { selected } = greedySelect(names, { scenarios: [sc], ...OPTS });
    expect(selected).toEqual(["CopyA"]);
  });

  it("keeps the trace non-decreasing until the stopping step", () => {
    const names = ["Sig", "N1", "N2", "N3"];
    const sc = makeScenario("trace", names, [0], 400, 3);
    const { selected, trace } = greedySelect(names, { scenarios: [sc], ...OPTS });
    for (let i = 1; i < trace.length - 1; i++) {
      expect(trace[i].meanAuc).toBeGreaterThanOrEqual(trace[i - 1].meanAuc);
    }
    for (let i = 0; i < trace.length; i++) {
      expect(trace[i].accepted).toBe(i < selected.length);
      if (i < trace.length - 1) expect(trace[i].accepted).toBe(true);
    }
    const last = trace[trace.length - 1];
    if (!last.accepted) expect(last.gain).toBeLessThanOrEqual(GAIN_EPSILON);
  });

  it("always selects at least one feature", () => {
    // pure noise everywhere: the best first candidate still gets accepted
    const names = ["N1", "N2", "N3"];
    const sc = makeScenario("noise", names, [], 200, 4);
    const { selected } = greedySelect(names, { scenarios: [sc], ...OPTS });
    expect(selected.length).toBeGreaterThanOrEqual(1);
  });

  it("requires at least two candidates", () => {
    expect(() => greedySelect(["Solo"], { scenarios: [] })).toThrow(/at least 2 candidate/);
  });
});
