import * as tf from '@tensorflow/tfjs';

/**
 * Network hyperparameters. The listed "filter size 32 x 32" of the source
 * architecture is read as 32 output filters of kernel length 32, the only
 * coherent reading for a 1-D convolution over a univariate series.
 * Convolutions are unpadded (valid) with stride 1; the first LSTM returns
 * its full sequence so the second LSTM is well-typed.
 */
export interface ModelSpec {
  convFilters: number;
  convKernelLength: number;
  convActivation: 'selu';
  poolSize: number;
  dropoutRate: number;
  lstmUnits: number;
  lstmActivation: 'tanh';
  epochs: number;
  batchSize: number;
  seed: number;
}

export const DEFAULT_MODEL_SPEC: ModelSpec = {
  convFilters: 32,
  convKernelLength: 32,
  convActivation: 'selu',
  poolSize: 4,
  dropoutRate: 0.1,
  lstmUnits: 128,
  lstmActivation: 'tanh',
  epochs: 100,
  batchSize: 25,
  seed: 0,
};

/** Output lengths after each conv/pool stage, for valid padding and stride 1. */
export function convStackLengths(signalLen: number, spec: ModelSpec): number[] {
  const lengths: number[] = [];
  let len = signalLen;
  for (let block = 0; block < 2; block++) {
    len = len - spec.convKernelLength + 1;
    if (len < 1) {
      throw new Error(`signal too short for conv block ${block + 1}: length ${len}`);
    }
    lengths.push(len);
    len = Math.floor(len / spec.poolSize);
    if (len < 1) {
      throw new Error(`signal too short after pool ${block + 1}`);
    }
    lengths.push(len);
  }
  return lengths;
}

/**
 * Conv1D(32, k=32) -> SeLU -> MaxPool(4) -> Dropout(0.1), twice, then
 * LSTM(128) returning the sequence, LSTM(128) returning its state, and a
 * 2-way softmax head. RMSprop with categorical cross-entropy.
 */
export function buildModel(spec: ModelSpec, signalLen: number): tf.Sequential {
  convStackLengths(signalLen, spec); // validates the length up front
  const kernelInitializer = tf.initializers.glorotUniform({ seed: spec.seed });
  const recurrentInitializer = tf.initializers.orthogonal({ seed: spec.seed + 1 });
  const model = tf.sequential();
  for (let block = 0; block < 2; block++) {
    model.add(
      tf.layers.conv1d({
        inputShape: block === 0 ? [signalLen, 1] : undefined,
        filters: spec.convFilters,
        kernelSize: spec.convKernelLength,
        strides: 1,
        padding: 'valid',
        activation: spec.convActivation,
        kernelInitializer,
      }),
    );
    model.add(tf.layers.maxPooling1d({ poolSize: spec.poolSize }));
    model.add(tf.layers.dropout({ rate: spec.dropoutRate, seed: spec.seed + 2 + block }));
  }
  model.add(
    tf.layers.lstm({
      units: spec.lstmUnits,
      activation: spec.lstmActivation,
      returnSequences: true,
      kernelInitializer,
      recurrentInitializer,
    }),
  );
  model.add(
    tf.layers.lstm({
      units: spec.lstmUnits,
      activation: spec.lstmActivation,
      kernelInitializer,
      recurrentInitializer,
    }),
  );
  model.add(
    tf.layers.dense({ units: 2, activation: 'softmax', kernelInitializer }),
  );
  model.compile({
    optimizer: tf.train.rmsprop(0.001),
    loss: 'categoricalCrossentropy',
    metrics: ['accuracy'],
  });
  return model;
}

/**
 * Per-class weights inversely proportional to class frequency:
 * weight(c) = nTotal / (nClasses * count(c)).
 */
export function classWeights(labels: number[]): { [cls: number]: number } {
  const counts = new Map<number, number>();
  for (const l of labels) {
    counts.set(l, (counts.get(l) ?? 0) + 1);
  }
  if (counts.size < 2) {
    throw new Error('degenerate classes: need both a positive and a negative class');
  }
  const weights: { [cls: number]: number } = {};
  for (const [cls, count] of counts) {
    weights[cls] = labels.length / (counts.size * count);
  }
  return weights;
}
