export interface BinaryMetrics {
  accuracy: number;
  f1: number;
  precision: number;
  recall: number;
}

/**
 * Standard binary-classification metrics with label 1 as positive.
 * Precision, recall, and F1 are defined as 0 when their denominator is 0.
 */
export function computeMetrics(yTrue: number[], yPred: number[]): BinaryMetrics {
  if (yTrue.length !== yPred.length || yTrue.length === 0) {
    throw new Error(`length mismatch: ${yTrue.length} true vs ${yPred.length} predicted`);
  }
  let tp = 0;
  let fp = 0;
  let fn = 0;
  let tn = 0;
  for (let i = 0; i < yTrue.length; i++) {
    if (yTrue[i] !== 0 && yTrue[i] !== 1) throw new Error('labels must be binary');
    if (yPred[i] !== 0 && yPred[i] !== 1) throw new Error('predictions must be binary');
    if (yTrue[i] === 1 && yPred[i] === 1) tp++;
    else if (yTrue[i] === 0 && yPred[i] === 1) fp++;
    else if (yTrue[i] === 1 && yPred[i] === 0) fn++;
    else tn++;
  }
  const accuracy = (tp + tn) / yTrue.length;
  const precision = tp + fp === 0 ? 0 : tp / (tp + fp);
  const recall = tp + fn === 0 ? 0 : tp / (tp + fn);
  const f1 =
    precision + recall === 0 ? 0 : (2 * precision * recall) / (precision + recall);
  return { accuracy, f1, precision, recall };
}

export function meanMetrics(folds: BinaryMetrics[]): BinaryMetrics {
  if (folds.length === 0) {
    throw new Error('no folds to average');
  }
  const mean = (pick: (m: BinaryMetrics) => number) =>
    folds.reduce((a, m) => a + pick(m), 0) / folds.length;
  return {
    accuracy: mean((m) => m.accuracy),
    f1: mean((m) => m.f1),
    precision: mean((m) => m.precision),
    recall: mean((m) => m.recall),
  };
}
