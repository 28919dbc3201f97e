"""Heart-rate estimation from PPG signals.

Two pipelines are provided: the basic one (detrend, 6th-order Chebyshev
low-pass, peak detection, median inter-peak interval) and the ensemble one
(five moving-average filters of orders 2..6 with a skewness quality gate).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError, InsufficientPeaksError
from .signal import (
    PeakList,
    PpgSignal,
    chebyshev_lowpass,
    detrend,
    find_peaks,
    moving_average,
    skewness,
)

MA_ORDERS = (2, 3, 4, 5, 6)


@dataclass(frozen=True)
class HrConfig:
    """Tunable parameters for both heart-rate pipelines."""

    detrend_order: int = 2
    chebyshev_order: int = 6
    cutoff_hz: float = 3.0
    passband_ripple_db: float = 0.5
    min_distance_s: float = 0.33
    min_prominence_frac: float = 0.2
    skew_threshold: float = 0.13
    interval_cv_floor: float = 0.015
    min_duration_s: float = 5.0


@dataclass(frozen=True)
class HeartRateEstimate:
    bpm: float
    method: str
    peak_count: int
    per_filter_bpm: Optional[tuple] = None
    skewness: Optional[float] = None
    quality_good: Optional[bool] = None

    def to_dict(self) -> dict:
        per_filter = None
        if self.per_filter_bpm is not None:
            per_filter = [None if math.isnan(v) else v for v in self.per_filter_bpm]
        return {
            "bpm": self.bpm,
            "method": self.method,
            "per_filter_bpm": per_filter,
            "skewness": self.skewness,
            "quality_good": self.quality_good,
            "peak_count": self.peak_count,
        }


def refine_peak_positions(samples: np.ndarray, peaks: PeakList) -> np.ndarray:
    """Sub-sample peak positions via a parabola through each peak and its neighbors.

    Boundary peaks and flat neighborhoods keep their integer position; the
    offset is clamped to half a sample either way.
    """
    positions = peaks.indices.astype(np.float64)
    for k, i in enumerate(peaks.indices):
        if i <= 0 or i >= samples.size - 1:
            continue
        y0, y1, y2 = samples[i - 1], samples[i], samples[i + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom == 0.0:
            continue
        delta = 0.5 * (y0 - y2) / denom
        positions[k] = i + float(np.clip(delta, -0.5, 0.5))
    return positions


def _intervals_s(peaks: PeakList, sample_rate_hz: float, samples=None) -> np.ndarray:
    if len(peaks) < 2:
        raise InsufficientPeaksError(
            f"need at least 2 peaks to form an interval, got {len(peaks)}"
        )
    if samples is None:
        positions = peaks.indices.astype(np.float64)
    else:
        positions = refine_peak_positions(np.asarray(samples, dtype=np.float64), peaks)
    return np.diff(positions) / sample_rate_hz


def heart_rate_from_peaks(peaks: PeakList, sample_rate_hz: float, samples=None) -> float:
    """Beats per minute as 60 over the median inter-peak interval.

    If the originating ``samples`` are supplied, peak positions are refined
    to sub-sample precision before differencing.
    """
    intervals = _intervals_s(peaks, sample_rate_hz, samples)
    return 60.0 / float(np.median(intervals))


def _check_duration(sig: PpgSignal, cfg: HrConfig):
    if sig.duration_s < cfg.min_duration_s:
        raise DataError(
            f"signal of {sig.duration_s:.2f} s is shorter than the "
            f"{cfg.min_duration_s:.0f} s minimum"
        )


def estimate_heart_rate_basic(sig: PpgSignal, cfg: HrConfig = HrConfig()) -> HeartRateEstimate:
    """Detrend, Chebyshev low-pass, peak detection, median-interval heart rate."""
    _check_duration(sig, cfg)
    clean = detrend(sig, cfg.detrend_order)
    filtered = chebyshev_lowpass(
        clean, cfg.chebyshev_order, cfg.cutoff_hz, cfg.passband_ripple_db
    )
    peaks = find_peaks(filtered, cfg.min_distance_s, cfg.min_prominence_frac)
    bpm = heart_rate_from_peaks(peaks, sig.sample_rate_hz, filtered.samples)
    return HeartRateEstimate(bpm=bpm, method="basic", peak_count=len(peaks))


def estimate_heart_rate_ensemble(sig: PpgSignal, cfg: HrConfig = HrConfig()) -> HeartRateEstimate:
    """Five moving-average branches pooled through a skewness quality gate.

    Each branch filters the detrended signal with a moving average of order
    2..6 and estimates a heart rate. Skewness of the pooled inter-peak
    intervals gates the result: below the threshold the mean of the branch
    estimates is returned, otherwise the order-2 branch alone. Branches
    without two peaks are dropped; perfectly regular pooled intervals count
    as zero skew.
    """
    _check_duration(sig, cfg)
    clean = detrend(sig, cfg.detrend_order)
    per_filter = []
    pooled = []
    peak_counts = {}
    for order in MA_ORDERS:
        filtered = moving_average(clean, order)
        peaks = find_peaks(filtered, cfg.min_distance_s, cfg.min_prominence_frac)
        peak_counts[order] = len(peaks)
        try:
            intervals = _intervals_s(peaks, sig.sample_rate_hz, filtered.samples)
        except InsufficientPeaksError:
            per_filter.append(float("nan"))
            continue
        per_filter.append(60.0 / float(np.median(intervals)))
        pooled.extend(intervals.tolist())
    valid = [v for v in per_filter if not math.isnan(v)]
    if not valid:
        raise InsufficientPeaksError("no ensemble branch produced two peaks")
    pooled_arr = np.asarray(pooled)
    # Skewness is scale-invariant, so on near-constant intervals it only
    # amplifies quantization residue. Below the regularity floor the beat
    # train counts as perfectly regular.
    regular = (
        pooled_arr.size < 3
        or pooled_arr.std() < cfg.interval_cv_floor * abs(pooled_arr.mean())
    )
    skew = 0.0 if regular else skewness(pooled_arr)
    quality_good = abs(skew) < cfg.skew_threshold
    if quality_good:
        bpm = float(np.mean(valid))
    elif not math.isnan(per_filter[0]):
        bpm = per_filter[0]
    else:
        bpm = valid[0]
    return HeartRateEstimate(
        bpm=bpm,
        method="ensemble",
        peak_count=peak_counts[2],
        per_filter_bpm=tuple(per_filter),
        skewness=skew,
        quality_good=quality_good,
    )


def percent_error(estimate_bpm: float, ground_truth_bpm: float) -> float:
    """Absolute percent error of an estimate against ground truth."""
    if not (ground_truth_bpm > 0):
        raise DataError(f"ground truth must be positive, got {ground_truth_bpm}")
    return 100.0 * abs(estimate_bpm - ground_truth_bpm) / ground_truth_bpm
