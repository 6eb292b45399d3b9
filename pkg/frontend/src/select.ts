// Greedy forward feature selection: each round adds the candidate with the
// best mean AUC over the scenarios, stopping once the best round no longer
// improves by more than GAIN_EPSILON. Ties keep the earlier candidate, so a
// duplicate of an already chosen feature can never displace anything.

import { EvalConfig, trainEval } from "./evaluate.js";

export const GAIN_EPSILON = 0.0005;

export interface SelectStep {
  feature: string;
  meanAuc: number;
  gain: number;
  accepted: boolean;
}

export interface Selection {
  selected: string[];
  trace: SelectStep[];
}

export function greedySelect(candidates: string[], cfg: Omit<EvalConfig, "features">): Selection {
  if (candidates.length < 2) {
    throw new Error(`need at least 2 candidate features, got ${candidates.length}`);
  }
  const selected: string[] = [];
  const trace: SelectStep[] = [];
  const remaining = [...candidates];
  let current = -Infinity; // the first feature is always worth more than none

  for (;;) {
    let bestMean = -Infinity;
    let bestIdx = -1;
    for (let i = 0; i < remaining.length; i++) {
      const report = trainEval({ ...cfg, features: [...selected, remaining[i]] });
      const mean = report.meanAuc;
      if (mean !== null && mean > bestMean) {
        bestMean = mean;
        bestIdx = i;
      }
    }
    if (bestIdx < 0) break; // every direction undefined, nothing to rank
    const gain = bestMean - (current === -Infinity ? 0 : current);
    const accepted = current === -Infinity || gain > GAIN_EPSILON;
    trace.push({ feature: remaining[bestIdx], meanAuc: bestMean, gain, accepted });
    if (!accepted) break;
    selected.push(remaining.splice(bestIdx, 1)[0]);
    current = bestMean;
    if (remaining.length === 0) break;
  }
  return { selected, trace };
}
