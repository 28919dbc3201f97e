"""Evaluation harness: per-trial heart-rate error tables and the
genuine/impostor authentication protocol."""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import AlgorithmError, DataError
from .heart_rate import (
    HrConfig,
    estimate_heart_rate_basic,
    estimate_heart_rate_ensemble,
    percent_error,
)
from .human_id import HumanIdConfig, enroll, verify
from .signal import PpgSignal


@dataclass(frozen=True)
class TrialRecord:
    """One recorded trial: either a path to a signal file or an inline signal."""

    user_label: str
    trial_index: int
    signal: PpgSignal
    ground_truth_bpm: Optional[float] = None

    def __post_init__(self):
        if self.trial_index < 1:
            raise DataError(f"trial_index must be >= 1, got {self.trial_index}")


def load_manifest(path) -> list:
    """Read a JSON manifest of trials.

    Each entry is an object with ``user_label``, ``trial_index``, optional
    ``ground_truth_bpm``, and either ``signal_path`` (a PPG CSV/JSON file,
    resolved relative to the manifest) or an inline ``signal`` object
    ``{"sample_rate_hz": ..., "samples": [...]}``.
    """
    from pathlib import Path

    from .io import read_signal

    path = Path(path)
    try:
        entries = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(entries, list):
        raise DataError("manifest must be a JSON list of trials")
    trials = []
    for k, entry in enumerate(entries):
        try:
            if "signal_path" in entry:
                sig = read_signal(path.parent / entry["signal_path"])
            else:
                inline = entry["signal"]
                sig = PpgSignal(
                    np.asarray(inline["samples"], dtype=np.float64),
                    float(inline["sample_rate_hz"]),
                )
            gt = entry.get("ground_truth_bpm")
            trials.append(
                TrialRecord(
                    user_label=str(entry["user_label"]),
                    trial_index=int(entry["trial_index"]),
                    signal=sig,
                    ground_truth_bpm=None if gt is None else float(gt),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"manifest entry {k} invalid: {exc}") from exc
    return trials


@dataclass(frozen=True)
class VitalsRow:
    user_label: str
    trial_index: int
    ground_truth_bpm: float
    calculated_bpm: Optional[float]
    percent_error: Optional[float]
    error_message: Optional[str] = None


@dataclass(frozen=True)
class VitalsReport:
    method: str
    rows: tuple
    per_user_mean_error: dict
    overall_mean_error: float
    failure_count: int

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "rows": [
                {
                    "user_label": r.user_label,
                    "trial_index": r.trial_index,
                    "ground_truth_bpm": r.ground_truth_bpm,
                    "calculated_bpm": r.calculated_bpm,
                    "percent_error": r.percent_error,
                    "error_message": r.error_message,
                }
                for r in self.rows
            ],
            "per_user_mean_error": self.per_user_mean_error,
            "overall_mean_error": self.overall_mean_error,
            "failure_count": self.failure_count,
        }

    def to_table(self) -> str:
        lines = [
            f"{'User':<10} {'Trial':>5} {'Ground Truth':>14} {'Calculated':>12} {'Error (%)':>10}"
        ]
        for r in self.rows:
            calc = f"{r.calculated_bpm:.2f}" if r.calculated_bpm is not None else "failed"
            err = f"{r.percent_error:.1f}" if r.percent_error is not None else "-"
            lines.append(
                f"{r.user_label:<10} {r.trial_index:>5} {r.ground_truth_bpm:>14.1f} "
                f"{calc:>12} {err:>10}"
            )
        for user, err in sorted(self.per_user_mean_error.items()):
            lines.append(f"{user:<10} {'':>5} {'':>14} {'Mean % Error':>12} {err:>10.1f}")
        lines.append(
            f"{'All':<10} {'':>5} {'':>14} {'Mean % Error':>12} {self.overall_mean_error:>10.1f}"
        )
        return "\n".join(lines)


def mean_error_of(errors) -> float:
    errors = [e for e in errors if e is not None]
    if not errors:
        return float("nan")
    return float(np.mean(errors))


def build_vitals_report(method: str, rows) -> VitalsReport:
    """Assemble the report from finished rows: per-user and overall means."""
    rows = tuple(rows)
    per_user = {}
    for user in sorted({r.user_label for r in rows}):
        per_user[user] = mean_error_of([r.percent_error for r in rows if r.user_label == user])
    return VitalsReport(
        method=method,
        rows=rows,
        per_user_mean_error=per_user,
        overall_mean_error=mean_error_of([r.percent_error for r in rows]),
        failure_count=sum(1 for r in rows if r.percent_error is None),
    )


def evaluate_vitals(trials, method: str = "basic", cfg: HrConfig = HrConfig()) -> VitalsReport:
    """Run the selected estimator on every trial and tabulate percent errors.

    Estimator failures are recorded per row and excluded from the means.
    """
    if method == "basic":
        estimator = estimate_heart_rate_basic
    elif method == "ensemble":
        estimator = estimate_heart_rate_ensemble
    else:
        raise DataError(f"unknown method {method!r}")
    rows = []
    for trial in sorted(trials, key=lambda t: (t.user_label, t.trial_index)):
        if trial.ground_truth_bpm is None:
            raise DataError(
                f"trial {trial.user_label}/{trial.trial_index} lacks ground truth"
            )
        try:
            est = estimator(trial.signal, cfg)
            err = percent_error(est.bpm, trial.ground_truth_bpm)
            rows.append(
                VitalsRow(trial.user_label, trial.trial_index, trial.ground_truth_bpm, est.bpm, err)
            )
        except AlgorithmError as exc:
            rows.append(
                VitalsRow(
                    trial.user_label, trial.trial_index, trial.ground_truth_bpm,
                    None, None, str(exc),
                )
            )
    return build_vitals_report(method, rows)


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    def to_dict(self) -> dict:
        return {"tp": self.tp, "fn": self.fn, "fp": self.fp, "tn": self.tn}


@dataclass(frozen=True)
class AuthReport:
    threshold_frac: float
    per_user: dict  # user_label -> ConfusionCounts
    untemplateable: tuple = ()

    def to_dict(self) -> dict:
        return {
            "threshold_frac": self.threshold_frac,
            "per_user": {u: c.to_dict() for u, c in self.per_user.items()},
            "untemplateable": list(self.untemplateable),
        }

    def to_table(self) -> str:
        lines = [f"{'User':<10} {'TP':>4} {'FN':>4} {'FP':>4} {'TN':>4}"]
        for user in sorted(self.per_user):
            c = self.per_user[user]
            lines.append(f"{user:<10} {c.tp:>4} {c.fn:>4} {c.fp:>4} {c.tn:>4}")
        return "\n".join(lines)


def evaluate_auth(
    trials,
    threshold_frac: float = 0.1,
    config: HumanIdConfig = HumanIdConfig(),
) -> AuthReport:
    """First-trial-per-user enrollment, all-trials comparison protocol.

    Each user's trial 1 becomes their template. Genuine comparisons run
    every trial of that user (trial 1 included, a guaranteed self-match)
    against the template; impostor comparisons run every trial of every
    other user against it. Untemplateable signals are reported separately.
    """
    config = replace(config, threshold_frac=threshold_frac)
    by_user = {}
    for trial in trials:
        by_user.setdefault(trial.user_label, []).append(trial)
    if len(by_user) < 2:
        raise DataError("authentication protocol needs at least 2 users")
    for user, user_trials in by_user.items():
        user_trials.sort(key=lambda t: t.trial_index)
        if len(user_trials) < 2:
            raise DataError(f"user {user} has fewer than 2 trials")

    templates = {}
    untemplateable = []
    for user in sorted(by_user):
        try:
            templates[user] = enroll(by_user[user][0].signal, user, config)
        except AlgorithmError:
            untemplateable.append(f"{user}/trial-{by_user[user][0].trial_index}")

    per_user = {}
    for user in sorted(templates):
        template = templates[user]
        tp = fn = fp = tn = 0
        for trial in by_user[user]:
            if verify(template, trial.signal).accepted:
                tp += 1
            else:
                fn += 1
        for other in sorted(by_user):
            if other == user:
                continue
            for trial in by_user[other]:
                if verify(template, trial.signal).accepted:
                    fp += 1
                else:
                    tn += 1
        per_user[user] = ConfusionCounts(tp=tp, fn=fn, fp=fp, tn=tn)
    return AuthReport(
        threshold_frac=threshold_frac,
        per_user=per_user,
        untemplateable=tuple(untemplateable),
    )
