/**
 * Train/test protocol: every scenario is a pair of labeled feature CSVs
 * (temporally first and second part). A forest is trained on one part and
 * scored on the other, in both directions; a direction whose test part
 * holds a single class has no defined AUC and is reported as such instead
 * of being guessed at.
 */

import { rocAuc } from "./auc.js";
import { FeatureTable, featureColumnsOf, readFeatureCsv, CsvSchemaError } from "./csv.js";
import { Forest } from "./forest.js";
import { Rng, mulberry32, randInt } from "./rng.js";

export interface ScenarioFiles {
  name: string;
  first: string;
  second: string;
}

export interface EvalConfig {
  scenarios: ScenarioFiles[];
  /** model features; default: every non-raw column shared by the pair */
  features?: string[];
  trees?: number;
  maxDepth?: number;
  seed?: number;
  /** permutation control: shuffle labels within each part before training */
  shuffleLabels?: boolean;
}

export interface ScenarioResult {
  name: string;
  trainFirstTestSecond: number | null;
  trainSecondTestFirst: number | null;
  /** mean of the defined directions, null if neither is defined */
  mean: number | null;
}

export interface EvalReport {
  features: string[];
  trees: number;
  seed: number;
  labelsShuffled: boolean;
  scenarios: ScenarioResult[];
  meanAuc: number | null;
  medianAuc: number | null;
  undefinedDirections: string[];
}

function resolveFeatures(cfg: EvalConfig, sc: ScenarioFiles): string[] {
  if (cfg.features !== undefined) {
    if (cfg.features.length === 0) throw new CsvSchemaError("empty feature list");
    return cfg.features;
  }
  const a = featureColumnsOf(sc.first);
  const b = featureColumnsOf(sc.second);
  if (a.length !== b.length || a.some((name, i) => name !== b[i])) {
    throw new CsvSchemaError(
      `${sc.first} and ${sc.second} disagree on feature columns; pass an explicit feature list`,
    );
  }
  return a;
}

function permuteLabels(labels: Uint8Array, rng: Rng): void {
  for (let i = labels.length - 1; i > 0; i--) {
    const j = randInt(rng, i + 1);
    const tmp = labels[i];
    labels[i] = labels[j];
    labels[j] = tmp;
  }
}

function direction(train: FeatureTable, test: FeatureTable, cfg: EvalConfig, seed: number): number | null {
  const forest = Forest.train(train.columns, train.labels, {
    trees: cfg.trees ?? 100,
    maxDepth: cfg.maxDepth ?? 0,
    seed,
  });
  return rocAuc(test.labels, forest.scoreColumns(test.columns));
}

export function trainEval(cfg: EvalConfig): EvalReport {
  if (cfg.scenarios.length === 0) throw new Error("no scenarios given");
  const seed = cfg.seed ?? 0;
  const scenarios: ScenarioResult[] = [];
  const undefinedDirections: string[] = [];
  let reportedFeatures: string[] | null = cfg.features ?? null;

  cfg.scenarios.forEach((sc, i) => {
    const features = resolveFeatures(cfg, sc);
    if (reportedFeatures === null) reportedFeatures = features;
    const first = readFeatureCsv(sc.first, features);
    const second = readFeatureCsv(sc.second, features);
    if (cfg.shuffleLabels) {
      permuteLabels(first.labels, mulberry32(seed + 7919 * (2 * i + 1)));
      permuteLabels(second.labels, mulberry32(seed + 7919 * (2 * i + 2)));
    }
    const fwd = direction(first, second, cfg, seed + 1000 * i);
    const rev = direction(second, first, cfg, seed + 1000 * i + 500);
    if (fwd === null) undefinedDirections.push(`${sc.name}:first->second`);
    if (rev === null) undefinedDirections.push(`${sc.name}:second->first`);
    const defined = [fwd, rev].filter((a): a is number => a !== null);
    scenarios.push({
      name: sc.name,
      trainFirstTestSecond: fwd,
      trainSecondTestFirst: rev,
      mean: defined.length > 0 ? defined.reduce((a, b) => a + b, 0) / defined.length : null,
    });
  });

  const means = scenarios.map((s) => s.mean).filter((m): m is number => m !== null);
  return {
    features: reportedFeatures ?? [],
    trees: cfg.trees ?? 100,
    seed,
    labelsShuffled: cfg.shuffleLabels ?? false,
    scenarios,
    meanAuc: means.length > 0 ? means.reduce((a, b) => a + b, 0) / means.length : null,
    medianAuc: median(means),
    undefinedDirections,
  };
}

export function median(values: number[]): number | null {
  if (values.length === 0) return null;
  const s = [...values].sort((a, b) => a - b);
  const mid = s.length >> 1;
  return s.length % 2 === 1 ? s[mid] : (s[mid - 1] + s[mid]) / 2;
}
