// Bagged forest over histogram CARTs: bootstrap sample per tree,
// sqrt(features) candidates per node, score = mean leaf fraction.

import { mulberry32, randInt } from "./rng.js";
import { BinnedData, TreeNode, TreeOptions, binColumns, buildTree, predictTree } from "./tree.js";

export interface ForestOptions {
  trees?: number;
  maxDepth?: number; // 0 = unlimited
  minLeaf?: number;
  featuresPerNode?: number; // default round(sqrt(d))
  seed?: number;
}

export class Forest {
  private constructor(
    readonly trees: TreeNode[],
    readonly nFeatures: number,
  ) {}

  static train(columns: Float64Array[], labels: Uint8Array, opts: ForestOptions = {}): Forest {
    const d = columns.length;
    if (d === 0) throw new Error("cannot train on zero features");
    const rows = columns[0].length;
    if (rows === 0) throw new Error("cannot train on zero rows");
    const nTrees = opts.trees ?? 100;
    const treeOpts: TreeOptions = {
      maxDepth: opts.maxDepth ?? 0,
      minLeaf: opts.minLeaf ?? 1,
      featuresPerNode: opts.featuresPerNode ?? Math.max(1, Math.round(Math.sqrt(d))),
    };
    const rng = mulberry32(opts.seed ?? 0);
    const binned: BinnedData = binColumns(columns);
    const trees: TreeNode[] = [];
    const sample = new Int32Array(rows);
    for (let t = 0; t < nTrees; t++) {
      for (let i = 0; i < rows; i++) sample[i] = randInt(rng, rows);
      trees.push(buildTree(binned, labels, sample, treeOpts, rng));
    }
    return new Forest(trees, d);
  }

  /** Fraction-of-positive score in [0, 1] for one row (feature order of training). */
  predict(row: ArrayLike<number>): number {
    let sum = 0;
    for (const t of this.trees) sum += predictTree(t, row);
    return sum / this.trees.length;
  }

  /** Scores for a column-major table with the training feature order. */
  scoreColumns(columns: Float64Array[]): Float64Array {
    if (columns.length !== this.nFeatures) {
      throw new Error(`forest trained on ${this.nFeatures} features, got ${columns.length}`);
    }
    const rows = columns.length > 0 ? columns[0].length : 0;
    const out = new Float64Array(rows);
    const row = new Float64Array(this.nFeatures);
    for (let r = 0; r < rows; r++) {
      for (let f = 0; f < this.nFeatures; f++) row[f] = columns[f][r];
      out[r] = this.predict(row);
    }
    return out;
  }
}
