"""Pulse-wave biometric templates and verification.

A user's template is built by slicing fixed-width waves around pulse peaks,
cross-correlating each wave with the mean wave, and taking the per-lag
minimum across waves. The peak of that minimum-correlation signal is the
user's representative value; probes are accepted when their representative
value lands within a fractional band around the enrolled one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import AlgorithmError, DataError, UntemplateableError
from .signal import PeakList, PpgSignal, chebyshev_lowpass, detrend, find_peaks

TEMPLATE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Wave:
    """Fixed-width excerpt centered on a pulse peak."""

    samples: np.ndarray
    center_peak_index: int

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=np.float64))


@dataclass(frozen=True)
class HumanIdConfig:
    half_width: int = 5
    threshold_frac: float = 0.1
    detrend_order: int = 2
    chebyshev_order: int = 2
    cutoff_hz: float = 3.0
    passband_ripple_db: float = 0.5
    min_distance_s: float = 0.33
    min_prominence_frac: float = 0.2
    # The source description of the decision rule is self-contradictory; the
    # reported outcomes imply accept-when-close, which is the default here.
    accept_when_far: bool = False


@dataclass(frozen=True)
class HumanIdTemplate:
    user_label: str
    id_signal: np.ndarray
    representative_value: float
    config: HumanIdConfig = field(default_factory=HumanIdConfig)

    def to_dict(self) -> dict:
        return {
            "user_label": self.user_label,
            "representative_value": self.representative_value,
            "id_signal": list(self.id_signal),
            "config": {
                "half_width": self.config.half_width,
                "threshold_frac": self.config.threshold_frac,
                "detrend_order": self.config.detrend_order,
                "accept_when_far": self.config.accept_when_far,
                "peaks": {
                    "min_distance_s": self.config.min_distance_s,
                    "min_prominence_frac": self.config.min_prominence_frac,
                },
                "filter": {
                    "order": self.config.chebyshev_order,
                    "cutoff_hz": self.config.cutoff_hz,
                    "ripple_db": self.config.passband_ripple_db,
                },
            },
            "format_version": TEMPLATE_FORMAT_VERSION,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "HumanIdTemplate":
        try:
            if data.get("format_version") != TEMPLATE_FORMAT_VERSION:
                raise DataError(
                    f"unsupported template format_version {data.get('format_version')!r}"
                )
            c = data["config"]
            config = HumanIdConfig(
                half_width=int(c["half_width"]),
                threshold_frac=float(c["threshold_frac"]),
                detrend_order=int(c.get("detrend_order", 2)),
                chebyshev_order=int(c["filter"]["order"]),
                cutoff_hz=float(c["filter"]["cutoff_hz"]),
                passband_ripple_db=float(c["filter"]["ripple_db"]),
                min_distance_s=float(c.get("peaks", {}).get("min_distance_s", 0.33)),
                min_prominence_frac=float(
                    c.get("peaks", {}).get("min_prominence_frac", 0.2)
                ),
                accept_when_far=bool(c.get("accept_when_far", False)),
            )
            return cls(
                user_label=str(data["user_label"]),
                id_signal=np.asarray(data["id_signal"], dtype=np.float64),
                representative_value=float(data["representative_value"]),
                config=config,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"invalid template: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "HumanIdTemplate":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid template: {exc}") from exc
        if not isinstance(data, dict):
            raise DataError("invalid template: expected a JSON object")
        return cls.from_dict(data)


@dataclass(frozen=True)
class AuthDecision:
    accepted: bool
    probe_value: float
    baseline_value: float
    abs_difference: float
    threshold: float
    reason: str = "match"

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "probe_value": self.probe_value,
            "baseline_value": self.baseline_value,
            "abs_difference": self.abs_difference,
            "threshold": self.threshold,
            "reason": self.reason,
        }


def extract_waves(sig: PpgSignal, peaks: PeakList, half_width: int) -> list:
    """One wave per peak far enough from both signal ends; order preserved."""
    if half_width < 1:
        raise DataError(f"half_width must be >= 1, got {half_width}")
    n = len(sig)
    waves = []
    for i in peaks.indices:
        if i < half_width or i > n - 1 - half_width:
            continue
        waves.append(Wave(sig.samples[i - half_width : i + half_width + 1], int(i)))
    return waves


def mean_wave(waves: list) -> Wave:
    """Pointwise arithmetic mean of equal-length waves."""
    if not waves:
        raise DataError("cannot average zero waves")
    lengths = {w.samples.size for w in waves}
    if len(lengths) != 1:
        raise DataError(f"waves differ in length: {sorted(lengths)}")
    stacked = np.stack([w.samples for w in waves])
    return Wave(stacked.mean(axis=0), -1)


def _zscore(x: np.ndarray, what: str) -> np.ndarray:
    std = x.std()
    if std == 0.0:
        raise AlgorithmError(f"zero-variance {what}")
    return (x - x.mean()) / std


def wave_correlations(waves: list, mean: Wave) -> np.ndarray:
    """Full cross-correlation of each z-scored wave against the z-scored mean.

    Returns an (n_waves, 2L-1) matrix over all lags from -(L-1) to L-1.
    """
    if not waves:
        raise DataError("need at least one wave")
    m = _zscore(mean.samples, "mean wave")
    rows = []
    for w in waves:
        z = _zscore(w.samples, f"wave at index {w.center_peak_index}")
        rows.append(np.correlate(z, m, mode="full"))
    return np.stack(rows)


def human_id_signal(corr: np.ndarray) -> np.ndarray:
    """Per-lag minimum of the correlation rows."""
    corr = np.asarray(corr, dtype=np.float64)
    if corr.ndim != 2 or corr.shape[0] < 1:
        raise DataError(f"expected a non-empty (waves, lags) matrix, got shape {corr.shape}")
    return corr.min(axis=0)


def compute_id_signal(sig: PpgSignal, config: HumanIdConfig) -> np.ndarray:
    """Run the full templating pipeline and return the min-correlation signal."""
    clean = detrend(sig, config.detrend_order)
    filtered = chebyshev_lowpass(
        clean, config.chebyshev_order, config.cutoff_hz, config.passband_ripple_db
    )
    peaks = find_peaks(filtered, config.min_distance_s, config.min_prominence_frac)
    waves = extract_waves(filtered, peaks, config.half_width)
    if len(waves) < 3:
        raise UntemplateableError(
            f"only {len(waves)} usable waves; at least 3 required"
        )
    mean = mean_wave(waves)
    return human_id_signal(wave_correlations(waves, mean))


def enroll(sig: PpgSignal, user_label: str, config: HumanIdConfig = HumanIdConfig()) -> HumanIdTemplate:
    """Build a user template from an enrollment signal."""
    id_signal = compute_id_signal(sig, config)
    return HumanIdTemplate(
        user_label=user_label,
        id_signal=id_signal,
        representative_value=float(id_signal.max()),
        config=config,
    )


def verify(template: HumanIdTemplate, probe: PpgSignal) -> AuthDecision:
    """Compare a probe's representative value against the enrolled baseline.

    An untemplateable probe is rejected outright, distinct from a biometric
    mismatch.
    """
    baseline = template.representative_value
    threshold = template.config.threshold_frac * abs(baseline)
    try:
        probe_id = compute_id_signal(probe, template.config)
    except UntemplateableError:
        return AuthDecision(
            accepted=False,
            probe_value=float("nan"),
            baseline_value=baseline,
            abs_difference=float("nan"),
            threshold=threshold,
            reason="rejected: untemplateable",
        )
    probe_value = float(probe_id.max())
    diff = abs(probe_value - baseline)
    close = diff <= threshold
    accepted = (not close) if template.config.accept_when_far else close
    return AuthDecision(
        accepted=accepted,
        probe_value=probe_value,
        baseline_value=baseline,
        abs_difference=diff,
        threshold=threshold,
        reason="match" if accepted else "mismatch",
    )


DEFAULT_THRESHOLD_GRID = tuple(round(0.01 * k, 2) for k in range(1, 51))


def choose_threshold(genuine_values, impostor_values, grid=DEFAULT_THRESHOLD_GRID) -> float:
    """Pick the threshold fraction maximizing true minus false positives.

    Inputs are normalized differences (absolute representative-value
    difference divided by the baseline magnitude) for genuine and impostor
    comparisons. Ties break toward the smaller threshold.
    """
    genuine = np.asarray(list(genuine_values), dtype=np.float64)
    impostor = np.asarray(list(impostor_values), dtype=np.float64)
    if genuine.size == 0 or impostor.size == 0:
        raise DataError("need at least one genuine and one impostor value")
    best_frac = None
    best_score = None
    for frac in grid:
        tp = int(np.sum(genuine <= frac))
        fp = int(np.sum(impostor <= frac))
        score = tp - fp
        if best_score is None or score > best_score:
            best_score = score
            best_frac = frac
    return float(best_frac)
