import * as tf from '@tensorflow/tfjs';
import { describe, expect, it } from 'vitest';
import {
  DEFAULT_MODEL_SPEC,
  buildModel,
  classWeights,
  convStackLengths,
} from '../src/model.js';

describe('convStackLengths', () => {
  it('follows the valid-padding arithmetic for a 210-sample input', () => {
    // 210 - 32 + 1 = 179, pooled by 4 -> 44; 44 - 32 + 1 = 13, pooled -> 3
    expect(convStackLengths(210, DEFAULT_MODEL_SPEC)).toEqual([179, 44, 13, 3]);
  });

  it('rejects signals too short for the stack', () => {
    expect(() => convStackLengths(40, DEFAULT_MODEL_SPEC)).toThrow();
    expect(() => convStackLengths(130, DEFAULT_MODEL_SPEC)).toThrow();
  });
});

describe('buildModel', () => {
  it('has the documented layer shapes for signal_len 210', () => {
    const model = buildModel(DEFAULT_MODEL_SPEC, 210);
    try {
      const shapes = model.layers.map((l) => l.outputShape as (number | null)[]);
      expect(shapes[0]).toEqual([null, 179, 32]); // conv1
      expect(shapes[1]).toEqual([null, 44, 32]); // pool1
      expect(shapes[3]).toEqual([null, 13, 32]); // conv2
      expect(shapes[4]).toEqual([null, 3, 32]); // pool2
      expect(shapes[6]).toEqual([null, 3, 128]); // lstm1 returns the sequence
      expect(shapes[7]).toEqual([null, 128]); // lstm2 returns its state
      expect(shapes[8]).toEqual([null, 2]); // softmax head
    } finally {
      model.dispose();
    }
  });

  it('softmax rows sum to 1 within 1e-6 on random input', async () => {
    const model = buildModel(DEFAULT_MODEL_SPEC, 210);
    const x = tf.randomNormal([4, 210, 1], 0, 1, 'float32', 3);
    try {
      const probs = model.predict(x) as tf.Tensor2D;
      const sums = Array.from(await probs.sum(1).data());
      probs.dispose();
      for (const s of sums) {
        expect(Math.abs(s - 1)).toBeLessThan(1e-6);
      }
    } finally {
      x.dispose();
      model.dispose();
    }
  });

  it('two builds with the same seed start from identical weights', () => {
    const a = buildModel(DEFAULT_MODEL_SPEC, 210);
    const b = buildModel(DEFAULT_MODEL_SPEC, 210);
    try {
      const wa = a.getWeights().map((w) => w.dataSync());
      const wb = b.getWeights().map((w) => w.dataSync());
      expect(wa.length).toBe(wb.length);
      for (let i = 0; i < wa.length; i++) {
        expect(Array.from(wa[i])).toEqual(Array.from(wb[i]));
      }
    } finally {
      a.dispose();
      b.dispose();
    }
  });
});

describe('classWeights', () => {
  it('gives 2.5 / 0.625 for a 6:24 split', () => {
    const labels = [...Array(6).fill(1), ...Array(24).fill(0)];
    const w = classWeights(labels);
    expect(w[1]).toBeCloseTo(2.5, 12);
    expect(w[0]).toBeCloseTo(0.625, 12);
  });

  it('is 1.0 for both classes when balanced', () => {
    const w = classWeights([1, 1, 0, 0]);
    expect(w[1]).toBeCloseTo(1, 12);
    expect(w[0]).toBeCloseTo(1, 12);
  });

  it('is invariant under scaling all counts', () => {
    const base = [...Array(3).fill(1), ...Array(9).fill(0)];
    const scaled = [...Array(12).fill(1), ...Array(36).fill(0)];
    const wBase = classWeights(base);
    const wScaled = classWeights(scaled);
    expect(wScaled[1]).toBeCloseTo(wBase[1], 12);
    expect(wScaled[0]).toBeCloseTo(wBase[0], 12);
  });

  it('rejects single-class labels', () => {
    expect(() => classWeights([1, 1, 1])).toThrow(/degenerate/);
  });
});
