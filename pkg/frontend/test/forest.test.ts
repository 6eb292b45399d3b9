import { describe, expect, it } from "vitest";
import { rocAuc } from "../src/auc.js";
import { Forest } from "../src/forest.js";
import { mulberry32 } from "../src/rng.js";
import { binColumns } from "../src/tree.js";

function separable(n: number, seed: number) {
  const rng = mulberry32(seed);
  const signal = new Float64Array(n);
  const noise = new Float64Array(n);
  const labels = new Uint8Array(n);
  for (let i = 0; i < n; i++) {
    labels[i] = rng() < 0.5 ? 1 : 0;
    signal[i] = labels[i] + (rng() - 0.5) * 0.2;
    noise[i] = rng();
  }
  return { columns: [signal, noise], labels };
}

describe("binColumns", () => {
  it("keeps the top bin nonempty and orders cuts", () => {
    const vals = Float64Array.from({ length: 1000 }, (_, i) => i % 10);
    const { cuts, codes } = binColumns([vals]);
    for (let i = 1; i < cuts[0].length; i++) expect(cuts[0][i]).toBeGreaterThan(cuts[0][i - 1]);
    expect(cuts[0][cuts[0].length - 1]).toBeLessThan(9);
    expect(Math.max(...codes[0])).toBe(cuts[0].length);
  });

  it("places thresholds midway to the next distinct value", () => {
    const vals = Float64Array.from({ length: 1000 }, (_, i) => i % 10);
    const { cuts, thresholds } = binColumns([vals]);
    for (let i = 0; i < cuts[0].length; i++) {
      expect(thresholds[0][i]).toBe(cuts[0][i] + 0.5);
    }
  });

  it("gives a constant column no cuts", () => {
    const { cuts } = binColumns([new Float64Array(50).fill(3)]);
    expect(cuts[0].length).toBe(0);
  });
});

describe("Forest", () => {
  it("separates an informative feature on held-out rows", () => {
    const train = separable(600, 1);
    const test = separable(400, 2);
    // with both features offered per node every tree finds the clean split
    const forest = Forest.train(train.columns, train.labels, { trees: 30, featuresPerNode: 2, seed: 5 });
    const auc = rocAuc(test.labels, forest.scoreColumns(test.columns));
    expect(auc).toBe(1);
  });

  it("stays nearly separable even with one candidate feature per node", () => {
    const train = separable(600, 1);
    const test = separable(400, 2);
    const forest = Forest.train(train.columns, train.labels, { trees: 30, featuresPerNode: 1, seed: 5 });
    const auc = rocAuc(test.labels, forest.scoreColumns(test.columns));
    expect(auc).toBeGreaterThan(0.99);
  });

  it("learns xor of two features", () => {
    const rng = mulberry32(3);
    const make = (n: number) => {
      const a = new Float64Array(n);
      const b = new Float64Array(n);
      const y = new Uint8Array(n);
      for (let i = 0; i < n; i++) {
        a[i] = rng() * 2 - 1;
        b[i] = rng() * 2 - 1;
        y[i] = a[i] > 0 !== b[i] > 0 ? 1 : 0;
      }
      return { columns: [a, b], labels: y };
    };
    const train = make(800);
    const test = make(400);
    const forest = Forest.train(train.columns, train.labels, { trees: 50, featuresPerNode: 2, seed: 9 });
    const auc = rocAuc(test.labels, forest.scoreColumns(test.columns));
    expect(auc).toBeGreaterThan(0.95);
  });

  it("scores stay inside [0, 1]", () => {
    const { columns, labels } = separable(300, 4);
    const forest = Forest.train(columns, labels, { trees: 15, seed: 0 });
    for (const s of forest.scoreColumns(columns)) {
      expect(s).toBeGreaterThanOrEqual(0);
      expect(s).toBeLessThanOrEqual(1);
    }
  });

  it("is deterministic for a seed and varies across seeds", () => {
    const { columns, labels } = separable(400, 6);
    const score = (seed: number) =>
      Array.from(Forest.train(columns, labels, { trees: 10, seed }).scoreColumns(columns));
    expect(score(11)).toEqual(score(11));
    expect(score(11)).not.toEqual(score(12));
  });

  it("trains on single-class labels and scores constantly", () => {
    const { columns } = separable(100, 8);
    const forest = Forest.train(columns, new Uint8Array(100), { trees: 5, seed: 1 });
    const scores = forest.scoreColumns(columns);
    expect(Array.from(new Set(scores))).toEqual([0]);
  });

  it("rejects empty input", () => {
    expect(() => Forest.train([], new Uint8Array(0))).toThrow(/zero features/);
    expect(() => Forest.train([new Float64Array(0)], new Uint8Array(0))).toThrow(/zero rows/);
  });

  it("rejects scoring with the wrong column count", () => {
    const { columns, labels } = separable(50, 10);
    const forest = Forest.train(columns, labels, { trees: 3, seed: 2 });
    expect(() => forest.scoreColumns(columns.slice(0, 1))).toThrow(/trained on 2 features/);
  });
});
