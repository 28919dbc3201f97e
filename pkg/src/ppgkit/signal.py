"""1-D signal kernels: detrending, filtering, peak detection, skewness."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .errors import DataError


@dataclass(frozen=True)
class PpgSignal:
    """Uniformly sampled real-valued time series."""

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise DataError(f"samples must be a non-empty 1-D sequence, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DataError("samples must be finite")
        if not (self.sample_rate_hz > 0):
            raise DataError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return len(self) / self.sample_rate_hz

    def with_samples(self, samples) -> "PpgSignal":
        return PpgSignal(np.asarray(samples, dtype=np.float64), self.sample_rate_hz)


@dataclass(frozen=True)
class PeakList:
    """Strictly increasing sample indices of detected pulse peaks."""

    indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.intp))

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp)
        if idx.size > 1 and not np.all(np.diff(idx) > 0):
            raise DataError("peak indices must be strictly increasing")
        if idx.size and idx.min() < 0:
            raise DataError("peak indices must be non-negative")
        object.__setattr__(self, "indices", idx)

    def __len__(self) -> int:
        return self.indices.size


def detrend(sig: PpgSignal, poly_order: int = 2) -> PpgSignal:
    """Subtract the least-squares polynomial fit of the given order.

    Removes DC shift and slow polynomial drift; the residual has zero mean.
    """
    if poly_order < 0:
        raise DataError(f"poly_order must be >= 0, got {poly_order}")
    if len(sig) <= poly_order:
        raise DataError(
            f"signal length {len(sig)} too short for order-{poly_order} fit"
        )
    x = np.arange(len(sig), dtype=np.float64)
    # Polynomial.fit maps x onto [-1, 1] internally, keeping the fit
    # well-conditioned for higher orders.
    fit = np.polynomial.Polynomial.fit(x, sig.samples, deg=poly_order)
    return sig.with_samples(sig.samples - fit(x))


def chebyshev_lowpass(
    sig: PpgSignal,
    order: int = 6,
    cutoff_hz: float = 3.0,
    passband_ripple_db: float = 0.5,
) -> PpgSignal:
    """Zero-phase Chebyshev Type-I low-pass.

    The digital filter comes from the bilinear transform of a prewarped
    analog prototype. It is applied forward and backward so pulse peaks are
    not delayed; effective stopband attenuation is therefore doubled.
    """
    if order < 1:
        raise DataError(f"filter order must be >= 1, got {order}")
    nyquist = sig.sample_rate_hz / 2.0
    if not (0 < cutoff_hz < nyquist):
        raise DataError(
            f"cutoff {cutoff_hz} Hz must lie in (0, {nyquist}) Hz"
        )
    b, a = scipy.signal.cheby1(order, passband_ripple_db, cutoff_hz, fs=sig.sample_rate_hz)
    # Even-order Type-I prototypes sit at the ripple floor at DC; rescale so
    # the filter has exactly unity DC gain and constants pass unchanged.
    b = b * (np.sum(a) / np.sum(b))
    padlen = min(3 * max(len(a), len(b)), len(sig) - 1)
    out = scipy.signal.filtfilt(b, a, sig.samples, padlen=padlen)
    return sig.with_samples(out)


def moving_average(sig: PpgSignal, order: int) -> PpgSignal:
    """Centered equal-weight moving average of FIR order ``order``.

    The window spans ``order + 1`` taps. For even window lengths the extra
    tap sits on the left. Windows shrink at the signal edges so the output
    has the same length as the input.
    """
    if order < 1:
        raise DataError(f"moving-average order must be >= 1, got {order}")
    n = len(sig)
    if n < order + 1:
        raise DataError(f"signal length {n} shorter than window {order + 1}")
    w = order + 1
    left = w // 2
    right = w - 1 - left
    csum = np.concatenate(([0.0], np.cumsum(sig.samples)))
    i = np.arange(n)
    lo = np.maximum(i - left, 0)
    hi = np.minimum(i + right, n - 1)
    out = (csum[hi + 1] - csum[lo]) / (hi - lo + 1)
    return sig.with_samples(out)


def find_peaks(
    sig: PpgSignal,
    min_distance_s: float = 0.33,
    min_prominence_frac: float = 0.2,
) -> PeakList:
    """Prominence-gated local maxima, thinned to a minimum spacing.

    Candidates are strict local maxima (plateaus resolve to their midpoint)
    whose topographic prominence reaches ``min_prominence_frac`` of the
    signal's full range. Thinning keeps higher peaks first until all
    survivors are at least ``min_distance_s`` apart.
    """
    if min_distance_s < 0:
        raise DataError(f"min_distance_s must be >= 0, got {min_distance_s}")
    if not (0 <= min_prominence_frac <= 1):
        raise DataError(f"min_prominence_frac must be in [0, 1], got {min_prominence_frac}")
    x = sig.samples
    span = float(x.max() - x.min())
    prominence = min_prominence_frac * span if span > 0 else None
    if prominence == 0.0:
        prominence = None
    distance = max(1, math.ceil(min_distance_s * sig.sample_rate_hz))
    idx, _ = scipy.signal.find_peaks(
        x, distance=distance, prominence=prominence, plateau_size=(1, None)
    )
    return PeakList(idx)


def skewness(values) -> float:
    """Adjusted Fisher-Pearson sample skewness G1 = g1 * sqrt(n(n-1)) / (n-2)."""
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 3:
        raise DataError(f"skewness needs at least 3 values, got {n}")
    mean = x.mean()
    m2 = np.mean((x - mean) ** 2)
    if m2 == 0.0:
        raise DataError("skewness undefined for zero-variance values")
    m3 = np.mean((x - mean) ** 3)
    g1 = m3 / m2**1.5
    return float(g1 * math.sqrt(n * (n - 1)) / (n - 2))
