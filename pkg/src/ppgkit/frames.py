"""Monochrome frame sequences: ROI cropping and pixel-intensity reduction.

A captured fingertip video is modelled as an ordered stack of 2-D intensity
grids. Each frame is reduced to a single PPG sample by summing (or averaging)
its pixel intensities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .signal import PpgSignal

SUPPORTED_BIT_DEPTHS = (8, 16)


@dataclass(frozen=True)
class RoiSpec:
    """Rectangular region of interest: top-left corner plus extent, in pixels."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise DataError(f"roi extent must be >= 1 pixel, got {self.w}x{self.h}")
        if self.x0 < 0 or self.y0 < 0:
            raise DataError(f"roi offset must be non-negative, got ({self.x0},{self.y0})")


class FrameSequence:
    """Ordered stack of equal-sized monochrome frames with a frame rate.

    Frames are stored as a (n_frames, height, width) array of unsigned
    integers. Bit depth is 8 or 16.
    """

    def __init__(self, frames, frame_rate_hz: float = 14.0, bit_depth: int = 8):
        if bit_depth not in SUPPORTED_BIT_DEPTHS:
            raise DataError(f"unsupported bit depth {bit_depth}; expected 8 or 16")
        arr = np.asarray(frames)
        if arr.ndim != 3:
            raise DataError(f"expected (n_frames, height, width) frames, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise DataError("zero frames")
        if not (frame_rate_hz > 0):
            raise DataError(f"frame_rate_hz must be positive, got {frame_rate_hz}")
        if np.any(arr < 0):
            raise DataError("negative pixel intensities")
        maxval = (1 << bit_depth) - 1
        if np.any(arr > maxval):
            raise DataError(f"pixel intensity exceeds {bit_depth}-bit range")
        dtype = np.uint8 if bit_depth == 8 else np.uint16
        self.frames = arr.astype(dtype)
        self.frame_rate_hz = float(frame_rate_hz)
        self.bit_depth = int(bit_depth)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def full_roi(self) -> RoiSpec:
        return RoiSpec(0, 0, self.width, self.height)


def crop(seq: FrameSequence, roi: RoiSpec) -> FrameSequence:
    """Restrict every frame to ``roi``; frame count and rate are unchanged."""
    if roi.x0 + roi.w > seq.width or roi.y0 + roi.h > seq.height:
        raise DataError(
            f"roi ({roi.x0},{roi.y0},{roi.w},{roi.h}) exceeds frame size "
            f"{seq.width}x{seq.height}"
        )
    sub = seq.frames[:, roi.y0 : roi.y0 + roi.h, roi.x0 : roi.x0 + roi.w]
    return FrameSequence(sub, seq.frame_rate_hz, seq.bit_depth)


def _otsu_threshold(values: np.ndarray, n_bins: int = 256) -> float:
    """Otsu's between-class-variance threshold over a histogram of ``values``."""
    lo = float(values.min())
    hi = float(values.max())
    if hi <= lo:
        return lo
    hist, edges = np.histogram(values, bins=n_bins, range=(lo, hi))
    centers = (edges[:-1] + edges[1:]) / 2.0
    weights = hist.astype(np.float64)
    total = weights.sum()
    w0 = np.cumsum(weights)
    w1 = total - w0
    cum_mean = np.cumsum(weights * centers)
    mean_total = cum_mean[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = cum_mean / w0
        mu1 = (mean_total - cum_mean) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between[~np.isfinite(between)] = -1.0
    k = int(np.argmax(between))
    return float(centers[k])


def auto_roi(seq: FrameSequence, min_fraction: float = 0.01) -> RoiSpec:
    """Bounding box of bright pixels in the temporal-mean frame.

    Pixels strictly above an Otsu threshold of the mean frame are selected;
    if fewer than ``min_fraction`` of pixels qualify the full frame is
    returned instead. Always yields an in-bounds ROI.
    """
    mean_frame = seq.frames.mean(axis=0, dtype=np.float64)
    thr = _otsu_threshold(mean_frame.ravel())
    mask = mean_frame > thr
    if mask.sum() < min_fraction * mask.size or not mask.any():
        return seq.full_roi()
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    y0, y1 = int(rows[0]), int(rows[-1])
    x0, x1 = int(cols[0]), int(cols[-1])
    return RoiSpec(x0, y0, x1 - x0 + 1, y1 - y0 + 1)


def extract_ppg(seq: FrameSequence, reduction: str = "sum") -> PpgSignal:
    """Reduce each frame to one PPG sample.

    ``reduction="sum"`` (default) is the total pixel intensity of the frame;
    ``"mean"`` divides by the pixel count, which only rescales the signal.
    Sums are accumulated in 64-bit integers so 16-bit high-resolution frames
    cannot overflow.
    """
    if reduction not in ("sum", "mean"):
        raise DataError(f"unknown reduction {reduction!r}")
    sums = seq.frames.astype(np.int64).sum(axis=(1, 2))
    samples = sums.astype(np.float64)
    if reduction == "mean":
        samples /= seq.width * seq.height
    return PpgSignal(samples, seq.frame_rate_hz)
