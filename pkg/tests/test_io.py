import json

import numpy as np
import pytest

from ppgkit import DataError, FrameSequence, PpgSignal
from ppgkit.io import (
    load_frames,
    read_pgm,
    read_ppgf,
    read_signal,
    write_frames_dir,
    write_pgm,
    write_ppgf,
    write_signal,
)


def sample_seq(bit_depth=8, n=6, h=3, w=4, rate=14.0):
    maxval = (1 << bit_depth) - 1
    rng = np.random.default_rng(12)
    frames = rng.integers(0, maxval + 1, size=(n, h, w))
    return FrameSequence(frames, rate, bit_depth)


class TestPgm:
    def test_roundtrip_8_bit(self, tmp_path):
        frame = np.arange(12, dtype=np.uint8).reshape(3, 4)
        p = tmp_path / "f.pgm"
        write_pgm(p, frame, 255)
        assert np.array_equal(read_pgm(p), frame)

    def test_roundtrip_16_bit(self, tmp_path):
        frame = (np.arange(12, dtype=np.uint16) * 5000).reshape(3, 4)
        p = tmp_path / "f.pgm"
        write_pgm(p, frame, 65535)
        back = read_pgm(p)
        assert back.dtype == np.uint16
        assert np.array_equal(back, frame)

    def test_comments_in_header(self, tmp_path):
        p = tmp_path / "c.pgm"
        p.write_bytes(b"P5\n# made by hand\n2 2\n255\n" + bytes([1, 2, 3, 4]))
        assert np.array_equal(read_pgm(p), [[1, 2], [3, 4]])

    def test_not_pgm_rejected(self, tmp_path):
        p = tmp_path / "x.pgm"
        p.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
        with pytest.raises(DataError):
            read_pgm(p)

    def test_truncated_pixels_rejected(self, tmp_path):
        p = tmp_path / "t.pgm"
        p.write_bytes(b"P5\n4 4\n255\n" + bytes(3))
        with pytest.raises(DataError):
            read_pgm(p)


class TestFramesDir:
    def test_roundtrip_with_sidecar(self, tmp_path):
        seq = sample_seq(rate=12.5)
        d = tmp_path / "frames"
        write_frames_dir(d, seq)
        back = load_frames(d)
        assert np.array_equal(back.frames, seq.frames)
        assert back.frame_rate_hz == 12.5
        assert back.bit_depth == 8

    def test_lexicographic_order(self, tmp_path):
        d = tmp_path / "frames"
        d.mkdir()
        # deliberately write out of order; loading must sort by name
        write_pgm(d / "frame_0001.pgm", np.full((2, 2), 20, dtype=np.uint8), 255)
        write_pgm(d / "frame_0000.pgm", np.full((2, 2), 10, dtype=np.uint8), 255)
        back = load_frames(d, frame_rate_hz=14.0)
        assert back.frames[0, 0, 0] == 10
        assert back.frames[1, 0, 0] == 20

    def test_default_rate_without_sidecar(self, tmp_path):
        d = tmp_path / "frames"
        d.mkdir()
        write_pgm(d / "a.pgm", np.zeros((2, 2), dtype=np.uint8), 255)
        assert load_frames(d).frame_rate_hz == 14.0

    def test_explicit_rate_wins_over_default(self, tmp_path):
        d = tmp_path / "frames"
        d.mkdir()
        write_pgm(d / "a.pgm", np.zeros((2, 2), dtype=np.uint8), 255)
        assert load_frames(d, frame_rate_hz=20.0).frame_rate_hz == 20.0

    def test_empty_dir_rejected(self, tmp_path):
        d = tmp_path / "frames"
        d.mkdir()
        with pytest.raises(DataError):
            load_frames(d)

    def test_missing_dir_rejected(self, tmp_path):
        with pytest.raises(DataError):
            load_frames(tmp_path / "nope")

    def test_mixed_sizes_rejected(self, tmp_path):
        d = tmp_path / "frames"
        d.mkdir()
        write_pgm(d / "a.pgm", np.zeros((2, 2), dtype=np.uint8), 255)
        write_pgm(d / "b.pgm", np.zeros((3, 3), dtype=np.uint8), 255)
        with pytest.raises(DataError):
            load_frames(d)


class TestPpgf:
    @pytest.mark.parametrize("bit_depth", [8, 16])
    def test_roundtrip(self, tmp_path, bit_depth):
        seq = sample_seq(bit_depth=bit_depth, rate=13.75)
        p = tmp_path / "cap.ppgf"
        write_ppgf(p, seq)
        back = read_ppgf(p)
        assert np.array_equal(back.frames, seq.frames)
        assert back.frame_rate_hz == 13.75
        assert back.bit_depth == bit_depth

    def test_header_layout(self, tmp_path):
        seq = sample_seq(n=2, h=3, w=4, rate=14.0)
        p = tmp_path / "cap.ppgf"
        write_ppgf(p, seq)
        raw = p.read_bytes()
        assert raw[:4] == b"PPGF"
        import struct

        magic, w, h, n, rate, depth = struct.unpack_from("<4sIIIdB", raw)
        assert (w, h, n, rate, depth) == (4, 3, 2, 14.0, 8)
        assert len(raw) == struct.calcsize("<4sIIIdB") + 2 * 3 * 4

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "bad.ppgf"
        p.write_bytes(b"XXXX" + bytes(30))
        with pytest.raises(DataError):
            read_ppgf(p)

    def test_truncated_payload(self, tmp_path):
        seq = sample_seq()
        p = tmp_path / "cap.ppgf"
        write_ppgf(p, seq)
        p.write_bytes(p.read_bytes()[:-5])
        with pytest.raises(DataError):
            read_ppgf(p)

    def test_load_frames_dispatch(self, tmp_path):
        seq = sample_seq()
        p = tmp_path / "cap.ppgf"
        write_ppgf(p, seq)
        back = load_frames(p, format="raw-container")
        assert np.array_equal(back.frames, seq.frames)


class TestSignalFiles:
    def test_csv_roundtrip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        sig = PpgSignal(rng.normal(size=50) * 1e6, 14.0)
        p = tmp_path / "sig.csv"
        write_signal(sig, p)
        back = read_signal(p)
        # repr() serialization makes the float round trip exact
        assert np.array_equal(back.samples, sig.samples)
        assert back.sample_rate_hz == 14.0

    def test_json_roundtrip(self, tmp_path):
        sig = PpgSignal(np.array([1.5, 2.5, 3.25]), 10.0)
        p = tmp_path / "sig.json"
        write_signal(sig, p)
        back = read_signal(p)
        assert np.array_equal(back.samples, sig.samples)
        assert back.sample_rate_hz == 10.0

    def test_missing_sidecar_rejected(self, tmp_path):
        p = tmp_path / "sig.csv"
        write_signal(PpgSignal(np.arange(1, 4, dtype=float), 14.0), p)
        (tmp_path / "sig.json").unlink()
        with pytest.raises(DataError):
            read_signal(p)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(DataError):
            read_signal(tmp_path / "absent.csv")

    def test_bad_header_rejected(self, tmp_path):
        p = tmp_path / "sig.csv"
        p.write_text("a,b\n0,1\n")
        (tmp_path / "sig.json").write_text(json.dumps({"sample_rate_hz": 14.0}))
        with pytest.raises(DataError):
            read_signal(p)

    def test_malformed_row_rejected(self, tmp_path):
        p = tmp_path / "sig.csv"
        p.write_text("sample_index,intensity\n0,abc\n")
        (tmp_path / "sig.json").write_text(json.dumps({"sample_rate_hz": 14.0}))
        with pytest.raises(DataError):
            read_signal(p)
