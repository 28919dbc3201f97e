import { readFileSync } from 'node:fs';
import Papa from 'papaparse';

/** Binary-labelled, equal-length signal matrix ready for training. */
export interface DlDataset {
  /** (nTrials x signalLen) pre-filtered signal rows. */
  signals: number[][];
  /** 1 = the user to authenticate, 0 = impostor. */
  labels: number[];
  sampleRateHz: number;
}

export interface ExportedContainer {
  signals: number[][];
  labels: string[];
  sampleRateHz: number;
  signalLen: number;
  lengthAdjusted: boolean;
}

interface ContainerMetadata {
  n_trials: number;
  signal_len: number;
  sample_rate_hz: number;
  labels: string[];
  length_adjusted: boolean;
}

/**
 * Read the upstream CSV+JSON dataset container.
 *
 * The CSV holds one row per trial: a string label column followed by the
 * signal samples; the JSON sidecar describes the layout. Both files share
 * the path prefix (`prefix.csv` / `prefix.json`).
 */
export function loadContainer(prefix: string): ExportedContainer {
  const meta = JSON.parse(readFileSync(`${prefix}.json`, 'utf8')) as ContainerMetadata;
  const parsed = Papa.parse<string[]>(readFileSync(`${prefix}.csv`, 'utf8').trim(), {
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`malformed dataset CSV: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  const header = rows[0];
  if (header[0] !== 'label') {
    throw new Error(`expected a "label" column first, got "${header[0]}"`);
  }
  const signals: number[][] = [];
  const labels: string[] = [];
  for (const row of rows.slice(1)) {
    labels.push(row[0]);
    const samples = row.slice(1).map(Number);
    if (samples.length !== meta.signal_len || samples.some((v) => !Number.isFinite(v))) {
      throw new Error(`trial "${row[0]}" does not match the declared signal_len`);
    }
    signals.push(samples);
  }
  if (signals.length !== meta.n_trials) {
    throw new Error(`CSV holds ${signals.length} trials, metadata says ${meta.n_trials}`);
  }
  return {
    signals,
    labels,
    sampleRateHz: meta.sample_rate_hz,
    signalLen: meta.signal_len,
    lengthAdjusted: meta.length_adjusted,
  };
}

/** Map string labels onto {1, 0}: 1 for the user to authenticate. */
export function binarizeLabels(labels: string[], positiveLabel: string): number[] {
  const out = labels.map((l) => (l === positiveLabel ? 1 : 0));
  if (!out.includes(1)) {
    throw new Error(`no trial carries the positive label "${positiveLabel}"`);
  }
  if (!out.includes(0)) {
    throw new Error('degenerate classes: every trial is positive');
  }
  return out;
}
