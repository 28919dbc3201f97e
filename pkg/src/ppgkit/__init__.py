"""Fingertip PPG toolkit: signal extraction, heart-rate estimation, and
pulse-wave biometric authentication."""

from .errors import (
    AlgorithmError,
    DataError,
    InsufficientPeaksError,
    PpgKitError,
    UntemplateableError,
)
from .frames import FrameSequence, RoiSpec, auto_roi, crop, extract_ppg
from .heart_rate import (
    HeartRateEstimate,
    HrConfig,
    estimate_heart_rate_basic,
    estimate_heart_rate_ensemble,
    heart_rate_from_peaks,
    percent_error,
)
from .human_id import (
    AuthDecision,
    HumanIdConfig,
    HumanIdTemplate,
    Wave,
    choose_threshold,
    enroll,
    extract_waves,
    human_id_signal,
    mean_wave,
    verify,
    wave_correlations,
)
from .signal import (
    PeakList,
    PpgSignal,
    chebyshev_lowpass,
    detrend,
    find_peaks,
    moving_average,
    skewness,
)
from .synth import MORPHOLOGIES, Morphology, SynthSpec, synth_frames, synth_ppg
from .evaluation import (
    AuthReport,
    ConfusionCounts,
    TrialRecord,
    VitalsReport,
    evaluate_auth,
    evaluate_vitals,
    load_manifest,
)
from .estimators import HeartRateEstimator, HumanIdAuthenticator, PpgExtractor

__version__ = "0.1.0"

__all__ = [
    "AlgorithmError",
    "AuthDecision",
    "AuthReport",
    "ConfusionCounts",
    "DataError",
    "FrameSequence",
    "HeartRateEstimate",
    "HeartRateEstimator",
    "HrConfig",
    "HumanIdAuthenticator",
    "HumanIdConfig",
    "HumanIdTemplate",
    "InsufficientPeaksError",
    "MORPHOLOGIES",
    "Morphology",
    "PeakList",
    "PpgExtractor",
    "PpgKitError",
    "PpgSignal",
    "RoiSpec",
    "SynthSpec",
    "TrialRecord",
    "UntemplateableError",
    "VitalsReport",
    "Wave",
    "auto_roi",
    "chebyshev_lowpass",
    "choose_threshold",
    "crop",
    "detrend",
    "enroll",
    "estimate_heart_rate_basic",
    "estimate_heart_rate_ensemble",
    "evaluate_auth",
    "evaluate_vitals",
    "extract_ppg",
    "extract_waves",
    "find_peaks",
    "heart_rate_from_peaks",
    "human_id_signal",
    "load_manifest",
    "mean_wave",
    "moving_average",
    "percent_error",
    "skewness",
    "synth_frames",
    "synth_ppg",
    "verify",
    "wave_correlations",
]
