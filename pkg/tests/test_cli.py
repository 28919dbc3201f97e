import json

import numpy as np
import pytest

from ppgkit.cli import EXIT_ALGORITHM, EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from ppgkit.io import read_signal, write_signal
from ppgkit.synth import SynthSpec, synth_ppg


def run(*argv):
    return main(list(argv))


@pytest.fixture()
def signal_csv(tmp_path):
    sig, _ = synth_ppg(SynthSpec(hr_bpm=72, duration_s=15, seed=5))
    path = tmp_path / "sig.csv"
    write_signal(sig, path)
    return path


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert run() == EXIT_USAGE
        capsys.readouterr()

    def test_unknown_command(self, capsys):
        assert run("frobnicate") == EXIT_USAGE
        capsys.readouterr()

    def test_missing_required_flag(self, capsys):
        assert run("synth") == EXIT_USAGE
        capsys.readouterr()


class TestSynthExtract:
    def test_synth_writes_signal_and_truth(self, tmp_path):
        out = tmp_path / "sig.csv"
        truth = tmp_path / "truth.json"
        assert (
            run("synth", "--hr", "70", "--seed", "3", "--out", str(out), "--truth-out", str(truth))
            == EXIT_OK
        )
        sig = read_signal(out)
        assert len(sig) == 210
        data = json.loads(truth.read_text())
        assert data["true_hr_bpm"] == pytest.approx(70.0)
        assert len(data["beat_peak_indices"]) >= 15

    def test_synth_requires_some_output(self, tmp_path, capsys):
        assert run("synth", "--hr", "70") == EXIT_DATA
        capsys.readouterr()

    def test_frames_roundtrip_through_extract(self, tmp_path):
        frames = tmp_path / "cap.ppgf"
        direct = tmp_path / "direct.csv"
        extracted = tmp_path / "extracted.csv"
        assert (
            run(
                "synth", "--hr", "66", "--seed", "9", "--out", str(direct),
                "--frames-out", str(frames), "--width", "4", "--height", "4",
            )
            == EXIT_OK
        )
        assert (
            run("extract", str(frames), "--format", "raw-container", "--out", str(extracted))
            == EXIT_OK
        )
        a = read_signal(direct).samples
        b = read_signal(extracted).samples
        # extraction recovers the signal up to the affine frame mapping
        assert np.corrcoef(a, b)[0, 1] > 0.999

    def test_extract_roi_flag(self, tmp_path):
        frames_dir = tmp_path / "frames"
        out = tmp_path / "sig.csv"
        assert (
            run(
                "synth", "--hr", "70", "--frames-out", str(frames_dir),
                "--frames-format", "image-directory", "--width", "6", "--height", "6",
            )
            == EXIT_OK
        )
        assert run("extract", str(frames_dir), "--roi", "1,1,3,3", "--out", str(out)) == EXIT_OK
        assert len(read_signal(out)) == 210

    def test_extract_bad_roi(self, tmp_path, capsys):
        frames = tmp_path / "cap.ppgf"
        run("synth", "--hr", "70", "--frames-out", str(frames))
        out = tmp_path / "sig.csv"
        code = run(
            "extract", str(frames), "--format", "raw-container",
            "--roi", "bogus", "--out", str(out),
        )
        assert code == EXIT_DATA
        capsys.readouterr()

    def test_extract_missing_input(self, tmp_path, capsys):
        assert (
            run("extract", str(tmp_path / "nope"), "--out", str(tmp_path / "o.csv"))
            == EXIT_DATA
        )
        capsys.readouterr()


class TestHr:
    def test_basic_json_output(self, signal_csv, tmp_path):
        out = tmp_path / "hr.json"
        assert run("hr", str(signal_csv), "--out", str(out)) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["method"] == "basic"
        assert data["bpm"] == pytest.approx(72.0, rel=0.02)

    def test_ensemble_fields(self, signal_csv, tmp_path):
        out = tmp_path / "hr.json"
        assert run("hr", str(signal_csv), "--method", "ensemble", "--out", str(out)) == EXIT_OK
        data = json.loads(out.read_text())
        assert len(data["per_filter_bpm"]) == 5
        assert data["quality_good"] is True

    def test_flat_signal_exits_algorithm(self, tmp_path, capsys):
        flat = tmp_path / "flat.csv"
        write_signal_flat(flat)
        assert run("hr", str(flat)) == EXIT_ALGORITHM
        capsys.readouterr()


def write_signal_flat(path):
    from ppgkit import PpgSignal

    write_signal(PpgSignal(np.zeros(210), 14.0), path)


class TestEnrollVerify:
    def test_enroll_verify_cycle(self, signal_csv, tmp_path):
        template = tmp_path / "tpl.json"
        decision = tmp_path / "decision.json"
        assert run("enroll", str(signal_csv), "--user", "alice", "--out", str(template)) == EXIT_OK
        tpl = json.loads(template.read_text())
        assert tpl["user_label"] == "alice"
        assert tpl["format_version"] == 1
        assert run("verify", str(template), str(signal_csv), "--out", str(decision)) == EXIT_OK
        data = json.loads(decision.read_text())
        assert data["accepted"] is True
        assert data["abs_difference"] == pytest.approx(0.0, abs=1e-12)

    def test_verify_missing_template(self, signal_csv, tmp_path, capsys):
        assert run("verify", str(tmp_path / "none.json"), str(signal_csv)) == EXIT_DATA
        capsys.readouterr()

    def test_enroll_flat_exits_algorithm(self, tmp_path, capsys):
        flat = tmp_path / "flat.csv"
        write_signal_flat(flat)
        assert (
            run("enroll", str(flat), "--user", "x", "--out", str(tmp_path / "t.json"))
            == EXIT_ALGORITHM
        )
        capsys.readouterr()


class TestEval:
    def test_builtin_vitals_benchmark(self, tmp_path):
        out = tmp_path / "report.json"
        assert (
            run("eval", "benchmark:vitals", "--method", "ensemble", "--out", str(out))
            == EXIT_OK
        )
        data = json.loads(out.read_text())
        assert data["method"] == "ensemble"
        assert len(data["rows"]) == 30
        assert data["overall_mean_error"] < 10.0

    def test_builtin_auth_benchmark_table(self, tmp_path):
        out = tmp_path / "report.txt"
        assert (
            run(
                "eval", "benchmark:auth", "--mode", "auth", "--threshold-frac", "0.03",
                "--output-format", "table", "--out", str(out),
            )
            == EXIT_OK
        )
        assert "user1" in out.read_text()

    def test_manifest_eval(self, tmp_path):
        sig_path = tmp_path / "t.csv"
        sig, truth = synth_ppg(SynthSpec(hr_bpm=64, duration_s=15, seed=8))
        write_signal(sig, sig_path)
        manifest = tmp_path / "m.json"
        manifest.write_text(
            json.dumps(
                [
                    {
                        "user_label": "u",
                        "trial_index": 1,
                        "ground_truth_bpm": truth.true_hr_bpm,
                        "signal_path": "t.csv",
                    }
                ]
            )
        )
        out = tmp_path / "r.json"
        assert run("eval", str(manifest), "--out", str(out)) == EXIT_OK
        data = json.loads(out.read_text())
        assert data["rows"][0]["percent_error"] < 2.0

    def test_missing_manifest(self, tmp_path, capsys):
        assert run("eval", str(tmp_path / "none.json")) == EXIT_DATA
        capsys.readouterr()


class TestExportDl:
    def write_manifest(self, tmp_path, lengths):
        entries = []
        for k, n in enumerate(lengths):
            sig, _ = synth_ppg(
                SynthSpec(hr_bpm=70 + 5 * k, duration_s=n / 14.0, seed=k)
            )
            entries.append(
                {
                    "user_label": f"u{k % 2}",
                    "trial_index": k // 2 + 1,
                    "signal": {
                        "sample_rate_hz": 14.0,
                        "samples": list(sig.samples),
                    },
                }
            )
        path = tmp_path / "m.json"
        path.write_text(json.dumps(entries))
        return path

    def test_container_layout(self, tmp_path):
        manifest = self.write_manifest(tmp_path, [210, 210, 196, 210])
        out = tmp_path / "dataset"
        assert run("export-dl", str(manifest), "--out", str(out)) == EXIT_OK
        meta = json.loads((tmp_path / "dataset.json").read_text())
        assert meta["n_trials"] == 4
        assert meta["signal_len"] == 196
        assert meta["length_adjusted"] is True
        assert meta["sample_rate_hz"] == 14.0
        lines = (tmp_path / "dataset.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header[0] == "label"
        assert header[1] == "s0" and header[-1] == "s195"
        assert len(lines) == 5
        for line in lines[1:]:
            values = np.array([float(v) for v in line.split(",")[1:]])
            assert values.size == 196
            # per-trial z-score: zero mean, unit population std
            assert abs(values.mean()) < 1e-9
            assert abs(values.std() - 1.0) < 1e-9

    def test_uniform_lengths_not_adjusted(self, tmp_path):
        manifest = self.write_manifest(tmp_path, [210, 210])
        out = tmp_path / "dataset"
        assert run("export-dl", str(manifest), "--out", str(out)) == EXIT_OK
        meta = json.loads((tmp_path / "dataset.json").read_text())
        assert meta["length_adjusted"] is False

    def test_mixed_rates_rejected(self, tmp_path, capsys):
        entries = [
            {
                "user_label": "a",
                "trial_index": 1,
                "signal": {"sample_rate_hz": 14.0, "samples": [1.0, 2.0, 1.0]},
            },
            {
                "user_label": "b",
                "trial_index": 1,
                "signal": {"sample_rate_hz": 30.0, "samples": [1.0, 2.0, 1.0]},
            },
        ]
        manifest = tmp_path / "m.json"
        manifest.write_text(json.dumps(entries))
        assert run("export-dl", str(manifest), "--out", str(tmp_path / "d")) == EXIT_DATA
        capsys.readouterr()


class TestDeterminism:
    def test_pipeline_byte_identical_across_runs(self, tmp_path):
        outputs = []
        for run_dir in ("a", "b"):
            d = tmp_path / run_dir
            d.mkdir()
            sig = d / "sig.csv"
            frames = d / "cap.ppgf"
            extracted = d / "ex.csv"
            hr = d / "hr.json"
            template = d / "tpl.json"
            decision = d / "dec.json"
            assert (
                run(
                    "synth", "--hr", "78", "--seed", "1234", "--noise-sigma", "0.05",
                    "--hr-jitter", "0.02", "--out", str(sig), "--frames-out", str(frames),
                )
                == EXIT_OK
            )
            assert (
                run("extract", str(frames), "--format", "raw-container", "--out", str(extracted))
                == EXIT_OK
            )
            assert run("hr", str(extracted), "--method", "ensemble", "--out", str(hr)) == EXIT_OK
            assert run("enroll", str(sig), "--user", "u", "--out", str(template)) == EXIT_OK
            assert run("verify", str(template), str(sig), "--out", str(decision)) == EXIT_OK
            outputs.append(
                tuple(p.read_bytes() for p in (sig, frames, extracted, hr, template, decision))
            )
        assert outputs[0] == outputs[1]
