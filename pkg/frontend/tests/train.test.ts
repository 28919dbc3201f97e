import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';
import { binarizeLabels, loadContainer } from '../src/dataset.js';
import { preprocess } from '../src/preprocess.js';
import { DEFAULT_MODEL_SPEC } from '../src/model.js';
import { trainCv } from '../src/cv.js';

const fixturePrefix = fileURLToPath(new URL('./fixtures/separable', import.meta.url));

describe('dataset container', () => {
  it('loads the exported CSV+JSON pair', () => {
    const container = loadContainer(fixturePrefix);
    expect(container.signals.length).toBe(30);
    expect(container.signalLen).toBe(210);
    expect(container.sampleRateHz).toBe(14);
    expect(new Set(container.labels)).toEqual(new Set(['target', 'other']));
  });

  it('binarizes labels around the user to authenticate', () => {
    const container = loadContainer(fixturePrefix);
    const y = binarizeLabels(container.labels, 'target');
    expect(y.filter((v) => v === 1).length).toBe(15);
    expect(() => binarizeLabels(container.labels, 'nobody')).toThrow();
  });
});

describe('trainCv on clearly separable data', () => {
  it('reaches mean accuracy >= 0.9 across 5 folds', async () => {
    const container = loadContainer(fixturePrefix);
    const dataset = preprocess(
      container.signals,
      binarizeLabels(container.labels, 'target'),
      container.sampleRateHz,
    );
    // two well-separated synthetic pulse shapes converge long before the
    // default budget; a reduced epoch count keeps the suite quick
    const spec = { ...DEFAULT_MODEL_SPEC, epochs: 5, seed: 4 };
    const report = await trainCv(dataset, spec, { k: 5, seed: 11 });
    expect(report.folds.length).toBe(5);
    for (const fold of report.folds) {
      expect(fold.missingPositives).toBe(false);
    }
    expect(report.mean.accuracy).toBeGreaterThanOrEqual(0.9);
  }, 300_000);
});
