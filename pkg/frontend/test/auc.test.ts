import { describe, expect, it } from "vitest";
import { rocAuc } from "../src/auc.js";
import { mulberry32, randInt } from "../src/rng.js";

// independent oracle: count positive/negative pairs directly, ties worth half
function pairwiseAuc(labels: number[], scores: number[]): number | null {
  const pos: number[] = [];
  const neg: number[] = [];
  labels.forEach((y, i) => (y === 1 ? pos : neg).push(scores[i]));
  if (pos.length === 0 || neg.length === 0) return null;
  let wins = 0;
  for (const p of pos) {
    for (const q of neg) {
      if (p > q) wins += 1;
      else if (p === q) wins += 0.5;
    }
  }
  return wins / (pos.length * neg.length);
}

describe("rocAuc", () => {
  it("is 1 for perfect separation and 0 when inverted", () => {
    expect(rocAuc([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9])).toBe(1);
    expect(rocAuc([1, 1, 0, 0], [0.1, 0.2, 0.8, 0.9])).toBe(0);
  });

  it("averages ties", () => {
    expect(rocAuc([0, 1], [0.5, 0.5])).toBe(0.5);
    expect(rocAuc([0, 0, 1, 1], [0.3, 0.5, 0.5, 0.7])).toBe(0.875);
    expect(rocAuc([1, 0, 1, 0, 1], [1, 1, 1, 0, 0])).toBe(pairwiseAuc([1, 0, 1, 0, 1], [1, 1, 1, 0, 0]));
  });

  it("is undefined with a single class", () => {
    expect(rocAuc([1, 1, 1], [0.1, 0.2, 0.3])).toBeNull();
    expect(rocAuc([0, 0], [0.1, 0.2])).toBeNull();
    expect(rocAuc([], [])).toBeNull();
  });

  it("rejects mismatched lengths", () => {
    expect(() => rocAuc([0, 1], [0.5])).toThrow(/differ in length/);
  });

  it("matches the pairwise count on random inputs with heavy ties", () => {
    const rng = mulberry32(7);
    for (let trial = 0; trial < 200; trial++) {
      const n = 2 + randInt(rng, 60);
      const labels: number[] = [];
      const scores: number[] = [];
      for (let i = 0; i < n; i++) {
        labels.push(rng() < 0.4 ? 1 : 0);
        scores.push(randInt(rng, 8) / 8); // coarse grid to force ties
      }
      const want = pairwiseAuc(labels, scores);
      const got = rocAuc(labels, scores);
      if (want === null) expect(got).toBeNull();
      else expect(got).toBeCloseTo(want, 12);
    }
  });
});
