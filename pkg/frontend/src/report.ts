import { writeFileSync } from "node:fs";
import { EvalReport } from "./evaluate.js";
import { SelectStep } from "./select.js";

export interface FullReport extends EvalReport {
  selectionTrace?: SelectStep[];
}

export function writeReport(path: string, report: FullReport): void {
  writeFileSync(path, JSON.stringify(report, null, 2) + "\n");
}

/** Per-scenario AUC table; undefined directions print as "undefined". */
export function aucTable(report: EvalReport): string {
  const cell = (v: number | null) => (v === null ? "undefined" : v.toFixed(4));
  const lines = ["scenario,train_first_test_second,train_second_test_first,mean"];
  for (const s of report.scenarios) {
    lines.push(`${s.name},${cell(s.trainFirstTestSecond)},${cell(s.trainSecondTestFirst)},${cell(s.mean)}`);
  }
  lines.push(`mean,,,${cell(report.meanAuc)}`);
  lines.push(`median,,,${cell(report.medianAuc)}`);
  return lines.join("\n") + "\n";
}

export function writeAucTable(path: string, report: EvalReport): void {
  writeFileSync(path, aucTable(report));
}
