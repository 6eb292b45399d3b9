#!/usr/bin/env node
/**
 * ml-eval evaluate --first p1.csv --second p2.csv [more pairs] [--name s1]
 *         [--features A,B] [--trees 100] [--max-depth 0] [--seed 0]
 *         [--shuffle-labels] [--report out.json] [--table out.csv]
 * ml-eval select   same pair/feature flags, greedy forward selection
 *
 * Exit codes: 0 ok, 1 usage, 2 bad data (schema mismatch, unreadable file).
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";
import { CsvSchemaError, featureColumnsOf } from "./csv.js";
import { EvalConfig, ScenarioFiles, trainEval } from "./evaluate.js";
import { FullReport, writeAucTable, writeReport } from "./report.js";
import { greedySelect } from "./select.js";

const USAGE = "usage: ml-eval <evaluate|select> --first a.csv --second b.csv [options]";

function scenarioList(firsts: string[], seconds: string[], names: string[]): ScenarioFiles[] {
  if (firsts.length === 0 || firsts.length !== seconds.length) {
    throw new UsageError("--first and --second must be given in pairs");
  }
  if (names.length > firsts.length) throw new UsageError("more --name flags than scenarios");
  return firsts.map((first, i) => ({ name: names[i] ?? `s${i + 1}`, first, second: seconds[i] }));
}

class UsageError extends Error {}

export function main(argv: string[]): number {
  try {
    return dispatch(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`${err.message}\n${USAGE}`);
      return 1;
    }
    if (err instanceof CsvSchemaError || (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(String((err as Error).message ?? err));
      return 2;
    }
    throw err;
  }
}

function dispatch(argv: string[]): number {
  const command = argv[0];
  if (command !== "evaluate" && command !== "select") throw new UsageError(`unknown command "${command ?? ""}"`);
  const { values } = parseArgs({
    args: argv.slice(1),
    options: {
      first: { type: "string", multiple: true },
      second: { type: "string", multiple: true },
      name: { type: "string", multiple: true },
      features: { type: "string" },
      trees: { type: "string" },
      "max-depth": { type: "string" },
      seed: { type: "string" },
      "shuffle-labels": { type: "boolean" },
      report: { type: "string" },
      table: { type: "string" },
    },
    strict: true,
  });

  const scenarios = scenarioList(values.first ?? [], values.second ?? [], values.name ?? []);
  const cfg: EvalConfig = {
    scenarios,
    features: values.features?.split(",").map((s) => s.trim()),
    trees: values.trees !== undefined ? Number(values.trees) : undefined,
    maxDepth: values["max-depth"] !== undefined ? Number(values["max-depth"]) : undefined,
    seed: values.seed !== undefined ? Number(values.seed) : undefined,
    shuffleLabels: values["shuffle-labels"],
  };

  let report: FullReport;
  if (command === "evaluate") {
    report = trainEval(cfg);
  } else {
    const candidates = cfg.features ?? featureColumnsOf(scenarios[0].first);
    const { features: _unused, ...rest } = cfg;
    const selection = greedySelect(candidates, rest);
    report = { ...trainEval({ ...rest, features: selection.selected }), selectionTrace: selection.trace };
  }

  if (values.report) writeReport(values.report, report);
  if (values.table) writeAucTable(values.table, report);
  console.log(JSON.stringify(report));
  return 0;
}

const isMain =
  typeof process.argv[1] === "string" && import.meta.url === pathToFileURL(process.argv[1]).href;
if (isMain) process.exit(main(process.argv.slice(2)));
