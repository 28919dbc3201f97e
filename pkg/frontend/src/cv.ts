import * as tf from '@tensorflow/tfjs';
import { DlDataset } from './dataset.js';
import { BinaryMetrics, computeMetrics, meanMetrics } from './metrics.js';
import { ModelSpec, buildModel, classWeights } from './model.js';

export interface Fold {
  trainIndices: number[];
  testIndices: number[];
}

export interface FoldResult extends BinaryMetrics {
  fold: number;
  /** True when the held-out fold contains no positive trial. */
  missingPositives: boolean;
}

export interface CvReport {
  folds: FoldResult[];
  mean: BinaryMetrics;
}

/** Deterministic 32-bit PRNG so fold assignment is reproducible per seed. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function shuffled(indices: number[], rand: () => number): number[] {
  const out = [...indices];
  for (let i = out.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}

/**
 * Seeded k-fold split. Stratified by default: each class is shuffled and
 * dealt round-robin across folds, so every fold sees both classes whenever
 * the counts permit. `stratified: false` shuffles all trials together,
 * which can starve small folds of positives (the failure mode the source
 * results exhibit).
 */
export function makeFolds(
  labels: number[],
  k: number,
  seed: number,
  stratified = true,
): Fold[] {
  if (k < 2 || labels.length < k) {
    throw new Error(`cannot make ${k} folds from ${labels.length} trials`);
  }
  const rand = mulberry32(seed);
  const assignment = new Array<number>(labels.length);
  if (stratified) {
    for (const cls of [0, 1]) {
      const members = labels
        .map((l, i) => (l === cls ? i : -1))
        .filter((i) => i >= 0);
      shuffled(members, rand).forEach((idx, pos) => {
        assignment[idx] = pos % k;
      });
    }
  } else {
    shuffled(
      labels.map((_, i) => i),
      rand,
    ).forEach((idx, pos) => {
      assignment[idx] = pos % k;
    });
  }
  const folds: Fold[] = [];
  for (let f = 0; f < k; f++) {
    folds.push({
      trainIndices: assignment.flatMap((a, i) => (a === f ? [] : [i])),
      testIndices: assignment.flatMap((a, i) => (a === f ? [i] : [])),
    });
  }
  return folds;
}

function toTensors(dataset: DlDataset, indices: number[]) {
  const x = tf.tensor3d(
    indices.map((i) => dataset.signals[i].map((v) => [v])),
  );
  const y = tf.tensor2d(
    indices.map((i) => (dataset.labels[i] === 1 ? [0, 1] : [1, 0])),
  );
  return { x, y };
}

export interface TrainCvOptions {
  k?: number;
  seed?: number;
  stratified?: boolean;
}

/**
 * Class-weighted k-fold cross-validation of the conv+LSTM classifier.
 * Each fold trains a fresh model for `spec.epochs` epochs and is scored on
 * its held-out trials; folds that end up with no positive test trial are
 * flagged rather than dropped.
 */
export async function trainCv(
  dataset: DlDataset,
  spec: ModelSpec,
  options: TrainCvOptions = {},
): Promise<CvReport> {
  const { k = 5, seed = 0, stratified = true } = options;
  const signalLen = dataset.signals[0].length;
  const folds = makeFolds(dataset.labels, k, seed, stratified);
  const results: FoldResult[] = [];
  for (let f = 0; f < folds.length; f++) {
    const { trainIndices, testIndices } = folds[f];
    const trainLabels = trainIndices.map((i) => dataset.labels[i]);
    const model = buildModel({ ...spec, seed: spec.seed + f }, signalLen);
    const train = toTensors(dataset, trainIndices);
    const test = toTensors(dataset, testIndices);
    try {
      await model.fit(train.x, train.y, {
        epochs: spec.epochs,
        batchSize: spec.batchSize,
        shuffle: true,
        verbose: 0,
        classWeight: classWeights(trainLabels),
      });
      const probs = model.predict(test.x) as tf.Tensor2D;
      const pred = Array.from(await probs.argMax(1).data());
      probs.dispose();
      const truth = testIndices.map((i) => dataset.labels[i]);
      results.push({
        fold: f + 1,
        missingPositives: !truth.includes(1),
        ...computeMetrics(truth, pred),
      });
    } finally {
      train.x.dispose();
      train.y.dispose();
      test.x.dispose();
      test.y.dispose();
      model.dispose();
    }
  }
  return { folds: results, mean: meanMetrics(results) };
}

/** Table-style text rendering of a cross-validation report. */
export function reportTable(report: CvReport): string {
  const row = (name: string, m: BinaryMetrics) =>
    `${name.padEnd(6)} ${m.accuracy.toFixed(4)} ${m.f1.toFixed(4)} ` +
    `${m.precision.toFixed(4)} ${m.recall.toFixed(4)}`;
  const lines = ['Fold   Acc    F1     Prec   Recall'];
  for (const f of report.folds) {
    lines.push(row(String(f.fold) + (f.missingPositives ? '*' : ''), f));
  }
  lines.push(row('mean', report.mean));
  return lines.join('\n');
}
