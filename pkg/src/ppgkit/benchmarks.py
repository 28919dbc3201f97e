"""Fixed seeded synthetic benchmarks used by the evaluation harness and the
acceptance suite. All parameters are frozen so results are reproducible."""
from __future__ import annotations

import numpy as np

from .evaluation import TrialRecord
from .synth import MORPHOLOGIES, SynthSpec, synth_ppg

BENCHMARK_SEED = 20240
DURATION_S = 15.0
SAMPLE_RATE_HZ = 14.0

_MORPH_NAMES = tuple(MORPHOLOGIES)  # 5 morphologies, insertion order

# Per-draw noise and drift for the vitals benchmark: draws 1-2 are clean,
# draws 3-6 add mild noise and polynomial drift.
_VITALS_DRAWS = (
    {"noise_sigma": 0.0, "drift": (), "hr_jitter_frac": 0.0},
    {"noise_sigma": 0.0, "drift": (0.0, 0.05), "hr_jitter_frac": 0.0},
    {"noise_sigma": 0.05, "drift": (0.0, -0.1, 0.01), "hr_jitter_frac": 0.02},
    {"noise_sigma": 0.10, "drift": (1.0, 0.2), "hr_jitter_frac": 0.03},
    {"noise_sigma": 0.15, "drift": (0.0, 0.0, 0.02), "hr_jitter_frac": 0.04},
    {"noise_sigma": 0.20, "drift": (-0.5, 0.3, -0.01), "hr_jitter_frac": 0.05},
)


def _trial_seed(base: int, morph_index: int, draw: int) -> int:
    return base + 1000 * morph_index + draw


def vitals_benchmark(seed: int = BENCHMARK_SEED) -> list:
    """30 trials: 5 morphologies x 6 draws, heart rates spread over 55-110 bpm."""
    hr_grid = np.linspace(55.0, 110.0, len(_MORPH_NAMES) * len(_VITALS_DRAWS))
    trials = []
    k = 0
    for m, name in enumerate(_MORPH_NAMES):
        for d, draw in enumerate(_VITALS_DRAWS):
            spec = SynthSpec(
                hr_bpm=float(hr_grid[k]),
                duration_s=DURATION_S,
                sample_rate_hz=SAMPLE_RATE_HZ,
                morphology=MORPHOLOGIES[name],
                seed=_trial_seed(seed, m, d),
                **draw,
            )
            sig, truth = synth_ppg(spec)
            trials.append(
                TrialRecord(
                    user_label=name,
                    trial_index=d + 1,
                    signal=sig,
                    ground_truth_bpm=truth.true_hr_bpm,
                )
            )
            k += 1
    return trials


def zero_noise_subset(trials) -> list:
    return [t for t in trials if t.trial_index <= 2]


def heavy_noise_benchmark(seed: int = BENCHMARK_SEED + 77) -> list:
    """Same layout as the vitals benchmark but with noise_sigma >= 0.5."""
    hr_grid = np.linspace(55.0, 110.0, len(_MORPH_NAMES) * 6)
    trials = []
    k = 0
    for m, name in enumerate(_MORPH_NAMES):
        for d in range(6):
            spec = SynthSpec(
                hr_bpm=float(hr_grid[k]),
                duration_s=DURATION_S,
                sample_rate_hz=SAMPLE_RATE_HZ,
                morphology=MORPHOLOGIES[name],
                noise_sigma=0.5 + 0.06 * d,
                drift=(0.0, 0.2),
                hr_jitter_frac=0.10,
                seed=_trial_seed(seed, m, d),
            )
            sig, truth = synth_ppg(spec)
            trials.append(
                TrialRecord(
                    user_label=name,
                    trial_index=d + 1,
                    signal=sig,
                    ground_truth_bpm=truth.true_hr_bpm,
                )
            )
            k += 1
    return trials


# Authentication benchmark: each "user" is a pulse morphology plus a
# breathing-like baseline oscillation of user-specific depth (expressed as a
# fixed polynomial so it flows through the drift field). Noise and jitter
# are small and held fixed per user, which keeps representative values
# stable within a user while the morphology/oscillation combination
# separates them across users.
#
# Degree-12 least-squares polynomial approximating sin(2*pi*0.3*t) on
# t in [0, 15] s, ascending coefficients; scaled by each user's depth.
_BREATHING_POLY = (
    9.303165138199e-01,
    -1.094330166288e+01,
    4.026345199758e+01,
    -5.355626293014e+01,
    3.539180021631e+01,
    -1.357543993147e+01,
    3.278203612393e+00,
    -5.195866520245e-01,
    5.487222983580e-02,
    -3.825924172695e-03,
    1.691481492186e-04,
    -4.295848251562e-06,
    4.773164724097e-08,
)

_AUTH_USERS = (
    {"morphology": "narrow", "hr_bpm": 62.0, "noise_sigma": 0.010, "hr_jitter_frac": 0.005, "breath_depth": 0.0},
    {"morphology": "smooth", "hr_bpm": 104.0, "noise_sigma": 0.005, "hr_jitter_frac": 0.003, "breath_depth": 1.0},
    {"morphology": "broad", "hr_bpm": 76.0, "noise_sigma": 0.005, "hr_jitter_frac": 0.003, "breath_depth": 1.0},
    {"morphology": "notched", "hr_bpm": 83.0, "noise_sigma": 0.015, "hr_jitter_frac": 0.005, "breath_depth": 0.5},
    {"morphology": "early_dicrotic", "hr_bpm": 90.0, "noise_sigma": 0.010, "hr_jitter_frac": 0.005, "breath_depth": 1.0},
)


def auth_benchmark(seed: int = BENCHMARK_SEED + 555, n_trials: int = 6) -> list:
    """5 users x 6 trials for the genuine/impostor protocol."""
    trials = []
    for u, params in enumerate(_AUTH_USERS):
        depth = params["breath_depth"]
        drift = tuple(depth * c for c in _BREATHING_POLY) if depth else ()
        for t in range(n_trials):
            spec = SynthSpec(
                hr_bpm=params["hr_bpm"],
                duration_s=DURATION_S,
                sample_rate_hz=SAMPLE_RATE_HZ,
                morphology=MORPHOLOGIES[params["morphology"]],
                drift=drift,
                noise_sigma=params["noise_sigma"],
                hr_jitter_frac=params["hr_jitter_frac"],
                seed=_trial_seed(seed, u, t),
            )
            sig, _ = synth_ppg(spec)
            trials.append(
                TrialRecord(
                    user_label=f"user{u + 1}",
                    trial_index=t + 1,
                    signal=sig,
                )
            )
    return trials
