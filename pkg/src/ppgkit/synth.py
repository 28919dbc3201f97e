"""Synthetic PPG and frame-sequence generation with known ground truth.

Signals are sums of per-beat pulse templates (Gaussian systolic peak plus a
delayed, scaled dicrotic bump) at jittered beat times, with optional
polynomial drift and Gaussian noise. All randomness comes from a portable
SplitMix64 stream so identical seeds give bit-identical output on any
platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .frames import FrameSequence
from .signal import PeakList, PpgSignal

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Portable 64-bit SplitMix generator with Box-Muller normals."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        self._spare = None

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def normal(self) -> float:
        if self._spare is not None:
            value, self._spare = self._spare, None
            return value
        # Box-Muller; u1 shifted away from 0 so log() is finite.
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(1.0 - u1))
        theta = 2.0 * math.pi * u2
        self._spare = r * math.sin(theta)
        return r * math.cos(theta)

    def normals(self, n: int) -> np.ndarray:
        return np.array([self.normal() for _ in range(n)], dtype=np.float64)


@dataclass(frozen=True)
class Morphology:
    """Pulse-shape parameters, expressed as fractions of the beat period."""

    systolic_width_frac: float
    dicrotic_amplitude_frac: float
    dicrotic_delay_frac: float


# Named pulse shapes standing in for distinct users in benchmarks.
MORPHOLOGIES = {
    "narrow": Morphology(0.11, 0.20, 0.45),
    "broad": Morphology(0.16, 0.10, 0.40),
    "notched": Morphology(0.14, 0.45, 0.45),
    "early_dicrotic": Morphology(0.13, 0.30, 0.30),
    "smooth": Morphology(0.20, 0.05, 0.50),
}


@dataclass(frozen=True)
class SynthSpec:
    hr_bpm: float
    duration_s: float
    sample_rate_hz: float = 14.0
    morphology: Morphology = MORPHOLOGIES["narrow"]
    drift: tuple = ()  # polynomial coefficients in ascending order, over time in s
    noise_sigma: float = 0.0  # fraction of unit pulse amplitude
    hr_jitter_frac: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (20.0 < self.hr_bpm < 240.0):
            raise DataError(f"hr_bpm must lie in (20, 240), got {self.hr_bpm}")
        if not (self.duration_s > 0):
            raise DataError(f"duration_s must be positive, got {self.duration_s}")
        if not (self.sample_rate_hz > 0):
            raise DataError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        if self.noise_sigma < 0:
            raise DataError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.hr_jitter_frac < 0:
            raise DataError(f"hr_jitter_frac must be >= 0, got {self.hr_jitter_frac}")


@dataclass(frozen=True)
class SynthGroundTruth:
    true_hr_bpm: float
    beat_peak_indices: PeakList


def synth_ppg(spec: SynthSpec):
    """Generate a synthetic PPG signal and its ground truth.

    Returns ``(PpgSignal, SynthGroundTruth)``. Beat times start half a
    period into the signal and advance by jittered periods; ground truth
    records the nearest sample index of every systolic peak and the mean
    realized heart rate.
    """
    rng = SplitMix64(spec.seed)
    period = 60.0 / spec.hr_bpm
    n = round(spec.duration_s * spec.sample_rate_hz)
    if n < 1:
        raise DataError("duration too short for one sample")
    t = np.arange(n, dtype=np.float64) / spec.sample_rate_hz

    beat_times = []
    tau = 0.5 * period
    while tau < spec.duration_s:
        beat_times.append(tau)
        interval = period * (1.0 + spec.hr_jitter_frac * rng.normal())
        tau += max(interval, 0.2 * period)

    m = spec.morphology
    sigma = m.systolic_width_frac * period
    # The dicrotic wavelet is broader than the systolic upstroke, so it reads
    # as a shoulder on the downslope rather than a second sharp peak.
    sigma_d = 1.5 * sigma
    delay = m.dicrotic_delay_frac * period
    samples = np.zeros(n)
    for tau in beat_times:
        samples += np.exp(-0.5 * ((t - tau) / sigma) ** 2)
        samples += m.dicrotic_amplitude_frac * np.exp(-0.5 * ((t - tau - delay) / sigma_d) ** 2)
    if spec.drift:
        samples += np.polynomial.polynomial.polyval(t, np.asarray(spec.drift, dtype=np.float64))
    if spec.noise_sigma > 0:
        samples += spec.noise_sigma * rng.normals(n)

    indices = []
    for tau in beat_times:
        i = round(tau * spec.sample_rate_hz)
        if 0 <= i < n and (not indices or i > indices[-1]):
            indices.append(i)
    if len(beat_times) >= 2:
        true_hr = 60.0 / float(np.mean(np.diff(beat_times)))
    else:
        true_hr = spec.hr_bpm
    truth = SynthGroundTruth(true_hr_bpm=true_hr, beat_peak_indices=PeakList(np.asarray(indices)))
    return PpgSignal(samples, spec.sample_rate_hz), truth


def synth_frames(sig: PpgSignal, width: int, height: int, bit_depth: int = 8) -> FrameSequence:
    """Render a signal as uniform frames, one per sample.

    Samples map affinely onto the full intensity range: the minimum sample
    becomes 0 and the maximum becomes the bit depth's maximum value. A
    constant signal renders at half scale. The total frame intensity is
    therefore an affine image of the input samples.
    """
    if width < 1 or height < 1:
        raise DataError(f"frame size must be >= 1x1, got {width}x{height}")
    if bit_depth not in (8, 16):
        raise DataError(f"unsupported bit depth {bit_depth}; expected 8 or 16")
    maxval = (1 << bit_depth) - 1
    lo = float(sig.samples.min())
    hi = float(sig.samples.max())
    if hi > lo:
        levels = np.rint((sig.samples - lo) / (hi - lo) * maxval).astype(np.int64)
    else:
        levels = np.full(len(sig), maxval // 2, dtype=np.int64)
    frames = np.repeat(levels[:, None, None], height, axis=1)
    frames = np.repeat(frames, width, axis=2)
    return FrameSequence(frames, sig.sample_rate_hz, bit_depth)
