/**
 * ROC AUC via the rank statistic: AUC = (R - nPos*(nPos+1)/2) / (nPos*nNeg)
 * where R is the sum of positive ranks with ties given their average rank.
 * Equivalent to the probability that a random positive scores above a
 * random negative, counting ties as half.
 */
export function rocAuc(labels: ArrayLike<number>, scores: ArrayLike<number>): number | null {
  const n = labels.length;
  if (n !== scores.length) throw new Error(`labels (${n}) and scores (${scores.length}) differ in length`);
  let nPos = 0;
  for (let i = 0; i < n; i++) if (labels[i] === 1) nPos++;
  const nNeg = n - nPos;
  if (nPos === 0 || nNeg === 0) return null; // undefined: one class absent

  const order = Array.from({ length: n }, (_, i) => i);
  order.sort((a, b) => scores[a] - scores[b]);

  let rankSumPos = 0;
  let i = 0;
  while (i < n) {
    let j = i;
    while (j + 1 < n && scores[order[j + 1]] === scores[order[i]]) j++;
    const avgRank = (i + j + 2) / 2; // ranks are 1-based
    for (let k = i; k <= j; k++) {
      if (labels[order[k]] === 1) rankSumPos += avgRank;
    }
    i = j + 1;
  }
  return (rankSumPos - (nPos * (nPos + 1)) / 2) / (nPos * nNeg);
}
