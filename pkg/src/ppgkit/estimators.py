"""Scikit-learn-compatible wrappers around the functional pipelines.

These adapters expose ``get_params``/``set_params`` and the familiar
fit/transform/predict surface so the toolkit composes with sklearn
pipelines and model-selection utilities. X is a 2-D array of equal-length
PPG signals (one row per trial) at a common sample rate.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .errors import AlgorithmError
from .frames import FrameSequence, auto_roi, crop, extract_ppg
from .heart_rate import (
    HrConfig,
    estimate_heart_rate_basic,
    estimate_heart_rate_ensemble,
)
from .human_id import HumanIdConfig, enroll, verify
from .signal import PpgSignal


def _check_rows(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError(f"expected a (n_trials, n_samples) array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("signals must be finite")
    return X


class PpgExtractor(BaseEstimator, TransformerMixin):
    """Transform frame sequences into PPG sample rows.

    ``transform`` accepts a list of FrameSequence objects and returns a list
    of 1-D sample arrays (lengths may differ across sequences).
    """

    def __init__(self, use_auto_roi=True, reduction="sum"):
        self.use_auto_roi = use_auto_roi
        self.reduction = reduction

    def fit(self, X, y=None):
        return self

    def transform(self, X):
        out = []
        for seq in X:
            if not isinstance(seq, FrameSequence):
                raise ValueError("PpgExtractor expects FrameSequence inputs")
            if self.use_auto_roi:
                seq = crop(seq, auto_roi(seq))
            out.append(extract_ppg(seq, self.reduction).samples)
        return out


class HeartRateEstimator(BaseEstimator):
    """Per-row heart-rate prediction via the basic or ensemble pipeline."""

    def __init__(
        self,
        method="ensemble",
        sample_rate_hz=14.0,
        detrend_order=2,
        chebyshev_order=6,
        cutoff_hz=3.0,
        passband_ripple_db=0.5,
        min_distance_s=0.33,
        min_prominence_frac=0.2,
        skew_threshold=0.13,
    ):
        self.method = method
        self.sample_rate_hz = sample_rate_hz
        self.detrend_order = detrend_order
        self.chebyshev_order = chebyshev_order
        self.cutoff_hz = cutoff_hz
        self.passband_ripple_db = passband_ripple_db
        self.min_distance_s = min_distance_s
        self.min_prominence_frac = min_prominence_frac
        self.skew_threshold = skew_threshold

    def _config(self) -> HrConfig:
        return HrConfig(
            detrend_order=self.detrend_order,
            chebyshev_order=self.chebyshev_order,
            cutoff_hz=self.cutoff_hz,
            passband_ripple_db=self.passband_ripple_db,
            min_distance_s=self.min_distance_s,
            min_prominence_frac=self.min_prominence_frac,
            skew_threshold=self.skew_threshold,
        )

    def fit(self, X, y=None):
        _check_rows(X)
        return self

    def predict(self, X):
        """Heart rate in bpm per row; NaN where no estimate is possible."""
        if self.method not in ("basic", "ensemble"):
            raise ValueError(f"unknown method {self.method!r}")
        estimator = (
            estimate_heart_rate_basic if self.method == "basic" else estimate_heart_rate_ensemble
        )
        cfg = self._config()
        out = []
        for row in _check_rows(X):
            try:
                out.append(estimator(PpgSignal(row, self.sample_rate_hz), cfg).bpm)
            except AlgorithmError:
                out.append(float("nan"))
        return np.asarray(out)


class HumanIdAuthenticator(BaseEstimator):
    """Enroll one user's signal with ``fit``, accept/reject probes with ``predict``."""

    def __init__(
        self,
        sample_rate_hz=14.0,
        half_width=5,
        threshold_frac=0.1,
        chebyshev_order=2,
        cutoff_hz=3.0,
        passband_ripple_db=0.5,
    ):
        self.sample_rate_hz = sample_rate_hz
        self.half_width = half_width
        self.threshold_frac = threshold_frac
        self.chebyshev_order = chebyshev_order
        self.cutoff_hz = cutoff_hz
        self.passband_ripple_db = passband_ripple_db

    def _config(self) -> HumanIdConfig:
        return HumanIdConfig(
            half_width=self.half_width,
            threshold_frac=self.threshold_frac,
            chebyshev_order=self.chebyshev_order,
            cutoff_hz=self.cutoff_hz,
            passband_ripple_db=self.passband_ripple_db,
        )

    def fit(self, X, y=None):
        """Enroll from a single signal (first row of X); y may carry the label."""
        rows = _check_rows(X)
        label = str(y[0]) if y is not None and len(y) else "user"
        self.template_ = enroll(
            PpgSignal(rows[0], self.sample_rate_hz), label, self._config()
        )
        return self

    def decision_function(self, X):
        """Negative normalized representative-value distance; higher is closer."""
        if not hasattr(self, "template_"):
            raise NotFittedError("call fit before decision_function")
        scores = []
        for row in _check_rows(X):
            decision = verify(self.template_, PpgSignal(row, self.sample_rate_hz))
            if np.isnan(decision.abs_difference):
                scores.append(-np.inf)
            else:
                scores.append(-decision.abs_difference / abs(decision.baseline_value))
        return np.asarray(scores)

    def predict(self, X):
        if not hasattr(self, "template_"):
            raise NotFittedError("call fit before predict")
        return np.asarray(
            [
                verify(self.template_, PpgSignal(row, self.sample_rate_hz)).accepted
                for row in _check_rows(X)
            ]
        )
