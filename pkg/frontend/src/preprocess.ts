import { DlDataset } from './dataset.js';

/**
 * Centered equal-weight moving average of FIR order `order`.
 *
 * Mirrors the upstream signal toolkit exactly: the window spans
 * `order + 1` taps, the extra tap of an even window sits on the left, and
 * windows shrink at the signal edges so output length equals input length.
 */
export function movingAverage(samples: number[], order: number): number[] {
  if (order < 1) {
    throw new Error(`moving-average order must be >= 1, got ${order}`);
  }
  const n = samples.length;
  if (n < order + 1) {
    throw new Error(`signal length ${n} shorter than window ${order + 1}`);
  }
  const w = order + 1;
  const left = Math.floor(w / 2);
  const right = w - 1 - left;
  const out = new Array<number>(n);
  for (let i = 0; i < n; i++) {
    const lo = Math.max(i - left, 0);
    const hi = Math.min(i + right, n - 1);
    let sum = 0;
    for (let j = lo; j <= hi; j++) {
      sum += samples[j];
    }
    out[i] = sum / (hi - lo + 1);
  }
  return out;
}

/** Z-score with the population standard deviation; errors on a constant row. */
export function zscore(samples: number[]): number[] {
  const n = samples.length;
  const mean = samples.reduce((a, b) => a + b, 0) / n;
  const variance = samples.reduce((a, b) => a + (b - mean) ** 2, 0) / n;
  if (variance === 0) {
    throw new Error('zero-variance signal cannot be normalized');
  }
  const std = Math.sqrt(variance);
  return samples.map((v) => (v - mean) / std);
}

export const PREPROCESS_MA_ORDER = 5;

/**
 * Order-5 moving average then per-trial z-score, the network's input
 * conditioning. Signals must already share one length (the exported
 * container guarantees this).
 */
export function preprocess(
  rawSignals: number[][],
  labels: number[],
  sampleRateHz: number,
): DlDataset {
  if (rawSignals.length !== labels.length) {
    throw new Error(`${rawSignals.length} signals but ${labels.length} labels`);
  }
  const lengths = new Set(rawSignals.map((s) => s.length));
  if (lengths.size > 1) {
    throw new Error('signals differ in length; export them through one container');
  }
  if (labels.some((l) => l !== 0 && l !== 1)) {
    throw new Error('labels must be binary');
  }
  return {
    signals: rawSignals.map((s) => zscore(movingAverage(s, PREPROCESS_MA_ORDER))),
    labels: [...labels],
    sampleRateHz,
  };
}
