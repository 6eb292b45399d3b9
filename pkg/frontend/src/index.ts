export { rocAuc } from "./auc.js";
export { BASE_COLUMNS, CsvSchemaError, FeatureTable, featureColumnsOf, readFeatureCsv } from "./csv.js";
export { Forest, ForestOptions } from "./forest.js";
export {
  EvalConfig,
  EvalReport,
  ScenarioFiles,
  ScenarioResult,
  median,
  trainEval,
} from "./evaluate.js";
export { GAIN_EPSILON, SelectStep, Selection, greedySelect } from "./select.js";
export { FullReport, aucTable, writeAucTable, writeReport } from "./report.js";
export { Rng, mulberry32 } from "./rng.js";
