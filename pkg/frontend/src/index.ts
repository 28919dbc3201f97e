export { DlDataset, ExportedContainer, binarizeLabels, loadContainer } from './dataset.js';
export { PREPROCESS_MA_ORDER, movingAverage, preprocess, zscore } from './preprocess.js';
export {
  DEFAULT_MODEL_SPEC,
  ModelSpec,
  buildModel,
  classWeights,
  convStackLengths,
} from './model.js';
export { BinaryMetrics, computeMetrics, meanMetrics } from './metrics.js';
export {
  CvReport,
  Fold,
  FoldResult,
  TrainCvOptions,
  makeFolds,
  mulberry32,
  reportTable,
  trainCv,
} from './cv.js';
