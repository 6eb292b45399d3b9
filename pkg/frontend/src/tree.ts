/**
 * Histogram CART for binary labels.
 *
 * Each feature is quantile-binned once per training set (at most 64 bins);
 * a node then scores every bin boundary of a random feature subset with one
 * O(rows) counting pass instead of re-sorting, which is what makes a
 * 100-tree forest affordable without native code. Split thresholds are
 * stored as raw values, so prediction never needs the binning.
 */

import { Rng, sampleIndices } from "./rng.js";

const MAX_BINS = 64;
// below this node size, search raw values instead of bins: small nodes are
// cheap to sort and global quantile bins can merge distinct nearby values,
// leaving clusters no recursion on the same bins could ever pull apart
const EXACT_LIMIT = 64;

export interface TreeOptions {
  maxDepth: number; // 0 means unlimited
  minLeaf: number;
  featuresPerNode: number;
}

export type TreeNode =
  | { f: number; thr: number; left: TreeNode; right: TreeNode }
  | { prob: number };

export interface BinnedData {
  /** the raw training columns, used by the exact small-node search */
  columns: Float64Array[];
  /** per feature: ascending cut values; value <= cuts[b] puts it in bin <= b */
  cuts: Float64Array[];
  /**
   * per feature: split threshold stored for bin b, the midpoint between
   * cuts[b] and the next distinct training value. Splitting on the raw cut
   * would sit exactly on a training value and misroute unseen values just
   * past it; the midpoint generalizes the way exact CART does.
   */
  thresholds: Float64Array[];
  /** per feature: bin code per row */
  codes: Uint8Array[];
  rows: number;
}

export function binColumns(columns: Float64Array[]): BinnedData {
  const rows = columns.length > 0 ? columns[0].length : 0;
  const cuts: Float64Array[] = [];
  const thresholds: Float64Array[] = [];
  const codes: Uint8Array[] = [];
  for (const colValues of columns) {
    const sorted = Float64Array.from(colValues).sort();
    const raw: number[] = [];
    for (let b = 1; b < MAX_BINS; b++) {
      const v = sorted[Math.floor((b / MAX_BINS) * (rows - 1))];
      if (raw.length === 0 || v > raw[raw.length - 1]) raw.push(v);
    }
    // drop the top edge: a cut at the maximum would make its right side empty
    if (raw.length > 0 && raw[raw.length - 1] >= sorted[rows - 1]) raw.pop();
    const c = Float64Array.from(raw);
    const thr = Float64Array.from(raw, (v) => {
      let lo = 0;
      let hi = rows; // first sorted value strictly above the cut
      while (lo < hi) {
        const mid = (lo + hi) >> 1;
        if (sorted[mid] <= v) lo = mid + 1;
        else hi = mid;
      }
      return (v + sorted[lo]) / 2;
    });
    cuts.push(c);
    thresholds.push(thr);
    const code = new Uint8Array(rows);
    for (let r = 0; r < rows; r++) code[r] = binOf(c, colValues[r]);
    codes.push(code);
  }
  return { columns, cuts, thresholds, codes, rows };
}

function binOf(cuts: Float64Array, v: number): number {
  let lo = 0;
  let hi = cuts.length; // first index with cuts[i] >= v
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (cuts[mid] < v) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

export function buildTree(
  data: BinnedData,
  y: Uint8Array,
  indices: Int32Array,
  opts: TreeOptions,
  rng: Rng,
): TreeNode {
  const d = data.cuts.length;
  const featScratch = new Int32Array(d);
  const cnt = new Int32Array(MAX_BINS);
  const pos = new Int32Array(MAX_BINS);

  function grow(idx: Int32Array, depth: number): TreeNode {
    const n = idx.length;
    let nPos = 0;
    for (let i = 0; i < n; i++) nPos += y[idx[i]];
    if (nPos === 0 || nPos === n || n < 2 * opts.minLeaf || (opts.maxDepth > 0 && depth >= opts.maxDepth)) {
      return { prob: nPos / n };
    }

    const giniCost = (nl: number, pl: number, nr: number, pr: number) =>
      nl - (pl * pl + (nl - pl) * (nl - pl)) / nl + nr - (pr * pr + (nr - pr) * (nr - pr)) / nr;

    // parent cost minus a hair: a split must strictly reduce weighted gini
    let bestCost = n - (nPos * nPos + (n - nPos) * (n - nPos)) / n - 1e-12;
    let bestF = -1;
    let bestThr = NaN;
    const exact = n <= EXACT_LIMIT;
    for (const f of sampleIndices(rng, d, opts.featuresPerNode, featScratch)) {
      if (exact) {
        const col = data.columns[f];
        const order = Array.from(idx).sort((a, b) => col[a] - col[b]);
        let nl = 0;
        let pl = 0;
        for (let i = 0; i < n - 1; i++) {
          nl++;
          pl += y[order[i]];
          if (col[order[i + 1]] === col[order[i]]) continue;
          const nr = n - nl;
          if (nl < opts.minLeaf || nr < opts.minLeaf) continue;
          const cost = giniCost(nl, pl, nr, nPos - pl);
          if (cost < bestCost) {
            bestCost = cost;
            bestF = f;
            bestThr = (col[order[i]] + col[order[i + 1]]) / 2;
          }
        }
        continue;
      }
      const nCuts = data.cuts[f].length;
      if (nCuts === 0) continue;
      cnt.fill(0, 0, nCuts + 1);
      pos.fill(0, 0, nCuts + 1);
      const code = data.codes[f];
      for (let i = 0; i < n; i++) {
        const b = code[idx[i]];
        cnt[b]++;
        pos[b] += y[idx[i]];
      }
      let nl = 0;
      let pl = 0;
      for (let b = 0; b < nCuts; b++) {
        nl += cnt[b];
        pl += pos[b];
        const nr = n - nl;
        if (nl < opts.minLeaf || nr < opts.minLeaf) continue;
        const cost = giniCost(nl, pl, nr, nPos - pl);
        if (cost < bestCost) {
          bestCost = cost;
          bestF = f;
          bestThr = data.thresholds[f][b];
        }
      }
    }
    if (bestF < 0) return { prob: nPos / n };

    // two-pointer partition against the threshold; in histogram mode the
    // threshold sits strictly between bin values, so this equals a bin split
    const col = data.columns[bestF];
    let lo = 0;
    let hi = n - 1;
    while (lo <= hi) {
      if (col[idx[lo]] <= bestThr) lo++;
      else {
        const tmp = idx[lo];
        idx[lo] = idx[hi];
        idx[hi] = tmp;
        hi--;
      }
    }
    return {
      f: bestF,
      thr: bestThr,
      left: grow(idx.subarray(0, lo), depth + 1),
      right: grow(idx.subarray(lo), depth + 1),
    };
  }

  return grow(indices, 0);
}

export function predictTree(node: TreeNode, row: ArrayLike<number>): number {
  let cur = node;
  while ("f" in cur) cur = row[cur.f] <= cur.thr ? cur.left : cur.right;
  return cur.prob;
}
