"""Command-line interface.

Subcommands: extract, hr, enroll, verify, eval, synth, export-dl.
Exit codes: 0 success, 1 usage error, 2 data error, 3 algorithm error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .benchmarks import auth_benchmark, vitals_benchmark
from .errors import AlgorithmError, DataError
from .evaluation import evaluate_auth, evaluate_vitals, load_manifest
from .frames import RoiSpec, auto_roi, crop, extract_ppg
from .heart_rate import HrConfig, estimate_heart_rate_basic, estimate_heart_rate_ensemble
from .human_id import HumanIdConfig, HumanIdTemplate, enroll, verify
from .io import load_frames, read_signal, write_frames_dir, write_ppgf, write_signal
from .synth import MORPHOLOGIES, SynthSpec, synth_frames, synth_ppg

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ALGORITHM = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_roi(text: str) -> RoiSpec:
    parts = text.split(",")
    if len(parts) != 4:
        raise DataError(f"expected --roi x0,y0,w,h, got {text!r}")
    try:
        x0, y0, w, h = (int(p) for p in parts)
    except ValueError as exc:
        raise DataError(f"non-integer roi component in {text!r}") from exc
    return RoiSpec(x0, y0, w, h)


def _emit(text: str, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_extract(args) -> int:
    seq = load_frames(args.frames_path, args.format, args.frame_rate)
    if args.roi is not None:
        seq = crop(seq, _parse_roi(args.roi))
    elif args.auto_roi:
        seq = crop(seq, auto_roi(seq))
    sig = extract_ppg(seq, args.reduction)
    write_signal(sig, args.out)
    return EXIT_OK


def _hr_config(args) -> HrConfig:
    return HrConfig(
        detrend_order=args.detrend_order,
        cutoff_hz=args.cutoff_hz,
        min_distance_s=args.min_distance_s,
        min_prominence_frac=args.min_prominence_frac,
    )


def cmd_hr(args) -> int:
    sig = read_signal(args.signal_path)
    estimator = estimate_heart_rate_basic if args.method == "basic" else estimate_heart_rate_ensemble
    est = estimator(sig, _hr_config(args))
    _emit(json.dumps(est.to_dict(), sort_keys=True), args.out)
    return EXIT_OK


def _human_id_config(args) -> HumanIdConfig:
    return HumanIdConfig(
        half_width=args.half_width,
        threshold_frac=args.threshold_frac,
        accept_when_far=args.accept_when_far,
    )


def cmd_enroll(args) -> int:
    sig = read_signal(args.signal_path)
    template = enroll(sig, args.user, _human_id_config(args))
    Path(args.out).write_text(template.to_json() + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    template_path = Path(args.template_path)
    if not template_path.exists():
        raise DataError(f"template {template_path} does not exist")
    template = HumanIdTemplate.from_json(template_path.read_text())
    sig = read_signal(args.signal_path)
    decision = verify(template, sig)
    _emit(json.dumps(decision.to_dict(), sort_keys=True), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.manifest == "benchmark:vitals":
        trials = vitals_benchmark()
    elif args.manifest == "benchmark:auth":
        trials = auth_benchmark()
    else:
        trials = load_manifest(args.manifest)
    if args.mode == "vitals":
        report = evaluate_vitals(trials, args.method)
    else:
        report = evaluate_auth(trials, args.threshold_frac)
    if args.output_format == "table":
        _emit(report.to_table(), args.out)
    else:
        _emit(json.dumps(report.to_dict(), sort_keys=True), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.morphology in MORPHOLOGIES:
        morphology = MORPHOLOGIES[args.morphology]
    else:
        raise DataError(
            f"unknown morphology {args.morphology!r}; choose from {sorted(MORPHOLOGIES)}"
        )
    drift = tuple(float(c) for c in args.drift.split(",")) if args.drift else ()
    spec = SynthSpec(
        hr_bpm=args.hr,
        duration_s=args.duration,
        sample_rate_hz=args.sample_rate,
        morphology=morphology,
        drift=drift,
        noise_sigma=args.noise_sigma,
        hr_jitter_frac=args.hr_jitter,
        seed=args.seed,
    )
    sig, truth = synth_ppg(spec)
    if args.out:
        write_signal(sig, args.out)
    if args.frames_out:
        seq = synth_frames(sig, args.width, args.height, args.bit_depth)
        if args.frames_format == "raw-container":
            write_ppgf(args.frames_out, seq)
        else:
            write_frames_dir(args.frames_out, seq)
    if not args.out and not args.frames_out:
        raise DataError("specify --out and/or --frames-out")
    if args.truth_out:
        Path(args.truth_out).write_text(
            json.dumps(
                {
                    "true_hr_bpm": truth.true_hr_bpm,
                    "beat_peak_indices": [int(i) for i in truth.beat_peak_indices.indices],
                },
                sort_keys=True,
            )
            + "\n"
        )
    return EXIT_OK


def cmd_export_dl(args) -> int:
    trials = load_manifest(args.manifest)
    if not trials:
        raise DataError("manifest holds no trials")
    trials = sorted(trials, key=lambda t: (t.user_label, t.trial_index))
    rates = {t.signal.sample_rate_hz for t in trials}
    if len(rates) != 1:
        raise DataError(f"trials disagree on sample rate: {sorted(rates)}")
    lengths = [len(t.signal) for t in trials]
    target_len = min(lengths)
    length_adjusted = max(lengths) != target_len
    labels = [t.user_label for t in trials]
    out = Path(args.out)
    csv_path = out.with_suffix(".csv")
    meta_path = out.with_suffix(".json")
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"s{k}" for k in range(target_len)])
        for t in trials:
            # Truncate to the common length, then z-score per trial.
            x = t.signal.samples[:target_len]
            std = x.std()
            if std == 0:
                raise DataError(
                    f"trial {t.user_label}/{t.trial_index} is constant; cannot normalize"
                )
            z = (x - x.mean()) / std
            writer.writerow([t.user_label] + [repr(float(v)) for v in z])
    meta_path.write_text(
        json.dumps(
            {
                "n_trials": len(trials),
                "signal_len": target_len,
                "sample_rate_hz": rates.pop(),
                "labels": labels,
                "length_adjusted": length_adjusted,
                "normalization": "per-trial z-score after truncation to the shortest trial",
            },
            sort_keys=True,
        )
        + "\n"
    )
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ppgkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="frames -> PPG signal file")
    p.add_argument("frames_path")
    p.add_argument("--format", choices=["image-directory", "raw-container"], default="image-directory")
    p.add_argument("--frame-rate", type=float, default=None)
    p.add_argument("--roi", default=None, help="x0,y0,w,h crop rectangle")
    p.add_argument("--auto-roi", action="store_true")
    p.add_argument("--reduction", choices=["sum", "mean"], default="sum")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("hr", help="signal -> heart-rate estimate JSON")
    p.add_argument("signal_path")
    p.add_argument("--method", choices=["basic", "ensemble"], default="basic")
    p.add_argument("--detrend-order", type=int, default=2)
    p.add_argument("--cutoff-hz", type=float, default=3.0)
    p.add_argument("--min-distance-s", type=float, default=0.33)
    p.add_argument("--min-prominence-frac", type=float, default=0.2)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_hr)

    p = sub.add_parser("enroll", help="signal -> user template JSON")
    p.add_argument("signal_path")
    p.add_argument("--user", required=True)
    p.add_argument("--half-width", type=int, default=5)
    p.add_argument("--threshold-frac", type=float, default=0.1)
    p.add_argument("--accept-when-far", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("verify", help="template + signal -> decision JSON")
    p.add_argument("template_path")
    p.add_argument("signal_path")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", help="trial manifest -> report")
    p.add_argument("manifest", help="manifest path, or benchmark:vitals / benchmark:auth")
    p.add_argument("--mode", choices=["vitals", "auth"], default="vitals")
    p.add_argument("--method", choices=["basic", "ensemble"], default="basic")
    p.add_argument("--threshold-frac", type=float, default=0.1)
    p.add_argument("--output-format", choices=["json", "table"], default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic signal and/or frames")
    p.add_argument("--hr", type=float, required=True)
    p.add_argument("--duration", type=float, default=15.0)
    p.add_argument("--sample-rate", type=float, default=14.0)
    p.add_argument("--morphology", default="narrow")
    p.add_argument("--drift", default="", help="comma-separated polynomial coefficients")
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--hr-jitter", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="signal file (.csv or .json)")
    p.add_argument("--frames-out", default=None)
    p.add_argument("--frames-format", choices=["image-directory", "raw-container"], default="raw-container")
    p.add_argument("--width", type=int, default=8)
    p.add_argument("--height", type=int, default=8)
    p.add_argument("--bit-depth", type=int, choices=[8, 16], default=8)
    p.add_argument("--truth-out", default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export-dl", help="manifest -> fixed-length dataset container")
    p.add_argument("manifest")
    p.add_argument("--out", required=True, help="output prefix; writes <out>.csv and <out>.json")
    p.set_defaults(func=cmd_export_dl)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except AlgorithmError as exc:
        print(f"ppgkit: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM
    except DataError as exc:
        print(f"ppgkit: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
