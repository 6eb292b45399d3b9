import { readFileSync } from "node:fs";
import { join } from "node:path";
import { afterAll, describe, expect, it } from "vitest";
import { EvalReport } from "../src/evaluate.js";
import { aucTable, writeAucTable, writeReport } from "../src/report.js";
import { makeTmpDir } from "./helpers.js";

const { dir, cleanup } = makeTmpDir("report");
afterAll(cleanup);

const report: EvalReport = {
  features: ["A", "B"],
  trees: 100,
  seed: 0,
  labelsShuffled: false,
  scenarios: [
    { name: "s1", trainFirstTestSecond: 0.91234, trainSecondTestFirst: 0.8, mean: 0.85617 },
    { name: "s2", trainFirstTestSecond: null, trainSecondTestFirst: 0.7, mean: 0.7 },
  ],
  meanAuc: 0.778085,
  medianAuc: 0.778085,
  undefinedDirections: ["s2:first->second"],
};

describe("aucTable", () => {
  it("prints one row per scenario plus mean and median", () => {
    const lines = aucTable(report).trimEnd().split("\n");
    expect(lines[0]).toBe("scenario,train_first_test_second,train_second_test_first,mean");
    expect(lines[1]).toBe("s1,0.9123,0.8000,0.8562");
    expect(lines[2]).toBe("s2,undefined,0.7000,0.7000");
    expect(lines[3]).toBe("mean,,,0.7781");
    expect(lines[4]).toBe("median,,,0.7781");
  });
});

describe("writers", () => {
  it("round-trips the report as JSON and writes the table", () => {
    const jsonPath = join(dir, "r.json");
    const csvPath = join(dir, "r.csv");
    writeReport(jsonPath, report);
    writeAucTable(csvPath, report);
    expect(JSON.parse(readFileSync(jsonPath, "utf-8"))).toEqual(report);
    expect(readFileSync(csvPath, "utf-8")).toBe(aucTable(report));
  });
});
