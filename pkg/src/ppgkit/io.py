"""File formats: PGM frame directories, the PPGF raw container, and PPG
signal CSV/JSON interchange."""
from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .errors import DataError
from .frames import FrameSequence
from .signal import PpgSignal

PPGF_MAGIC = b"PPGF"
_PPGF_HEADER = struct.Struct("<4sIIIdB")
DEFAULT_FRAME_RATE_HZ = 14.0


# -- PGM (P5) ---------------------------------------------------------------

def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) PGM image; 16-bit samples are big-endian."""
    path = Path(path)
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise DataError(f"{path}: not a binary PGM (P5) file")
    # Header tokens may be separated by whitespace and '#' comment lines.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DataError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise DataError(f"{path}: malformed PGM header") from exc
    if maxval < 1 or maxval > 65535:
        raise DataError(f"{path}: unsupported PGM maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.uint8
    count = width * height
    try:
        pixels = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    except ValueError as exc:
        raise DataError(f"{path}: truncated PGM pixel data") from exc
    if pixels.size != count:
        raise DataError(f"{path}: truncated PGM pixel data")
    return pixels.reshape(height, width).astype(np.uint16 if maxval > 255 else np.uint8)


def write_pgm(path, frame: np.ndarray, maxval: int = 255):
    frame = np.asarray(frame)
    if maxval <= 255:
        payload = frame.astype(np.uint8).tobytes()
    else:
        payload = frame.astype(">u2").tobytes()
    header = f"P5\n{frame.shape[1]} {frame.shape[0]}\n{maxval}\n".encode()
    Path(path).write_bytes(header + payload)


# -- frame sequence loading -------------------------------------------------

def load_frames(path, format: str = "image-directory", frame_rate_hz: float = None) -> FrameSequence:
    """Load a frame sequence from a PGM directory or a PPGF container.

    Directory frames are taken in lexicographic filename order; the frame
    rate comes from a ``frame_rate.json`` sidecar, the ``frame_rate_hz``
    argument, or the device default of 14.
    """
    path = Path(path)
    if format == "raw-container":
        return read_ppgf(path)
    if format != "image-directory":
        raise DataError(f"unknown frame format {format!r}")
    if not path.is_dir():
        raise DataError(f"frame directory {path} does not exist")
    files = sorted(p for p in path.iterdir() if p.suffix.lower() == ".pgm")
    if not files:
        raise DataError(f"zero frames in {path}")
    frames = [read_pgm(p) for p in files]
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise DataError(f"mixed dimensions in {path}: {sorted(shapes)}")
    bit_depth = 16 if any(f.dtype == np.uint16 for f in frames) else 8
    if frame_rate_hz is None:
        sidecar = path / "frame_rate.json"
        if sidecar.exists():
            try:
                frame_rate_hz = float(json.loads(sidecar.read_text())["frame_rate_hz"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError(f"invalid sidecar {sidecar}: {exc}") from exc
        else:
            frame_rate_hz = DEFAULT_FRAME_RATE_HZ
    return FrameSequence(np.stack(frames), frame_rate_hz, bit_depth)


def write_frames_dir(path, seq: FrameSequence):
    """Write a sequence as zero-padded PGM files plus a frame-rate sidecar."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    maxval = (1 << seq.bit_depth) - 1
    digits = max(4, len(str(seq.n_frames - 1)))
    for k in range(seq.n_frames):
        write_pgm(path / f"frame_{k:0{digits}d}.pgm", seq.frames[k], maxval)
    (path / "frame_rate.json").write_text(
        json.dumps({"frame_rate_hz": seq.frame_rate_hz})
    )


# -- PPGF raw container -----------------------------------------------------

def write_ppgf(path, seq: FrameSequence):
    """Write the little-endian PPGF container: header then row-major frames."""
    header = _PPGF_HEADER.pack(
        PPGF_MAGIC, seq.width, seq.height, seq.n_frames, seq.frame_rate_hz, seq.bit_depth
    )
    dtype = "<u1" if seq.bit_depth == 8 else "<u2"
    Path(path).write_bytes(header + seq.frames.astype(dtype).tobytes())


def read_ppgf(path) -> FrameSequence:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if len(data) < _PPGF_HEADER.size:
        raise DataError(f"{path}: truncated PPGF header")
    magic, width, height, n_frames, rate, bit_depth = _PPGF_HEADER.unpack_from(data)
    if magic != PPGF_MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}")
    if bit_depth not in (8, 16):
        raise DataError(f"{path}: unsupported bit depth {bit_depth}")
    dtype = np.dtype("<u1") if bit_depth == 8 else np.dtype("<u2")
    count = n_frames * width * height
    try:
        pixels = np.frombuffer(data, dtype=dtype, count=count, offset=_PPGF_HEADER.size)
    except ValueError as exc:
        raise DataError(f"{path}: truncated PPGF pixel data") from exc
    if pixels.size != count:
        raise DataError(f"{path}: truncated PPGF pixel data")
    return FrameSequence(pixels.reshape(n_frames, height, width), rate, bit_depth)


# -- PPG signal interchange -------------------------------------------------

def _sidecar_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def write_signal(sig: PpgSignal, path):
    """Write a signal as CSV plus JSON sidecar, or as a single JSON object."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(
            json.dumps(
                {"sample_rate_hz": sig.sample_rate_hz, "samples": list(sig.samples)},
                sort_keys=True,
            )
        )
        return
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_index", "intensity"])
        for k, v in enumerate(sig.samples):
            writer.writerow([k, repr(float(v))])
    _sidecar_path(path).write_text(json.dumps({"sample_rate_hz": sig.sample_rate_hz}))


def read_signal(path) -> PpgSignal:
    path = Path(path)
    if not path.exists():
        raise DataError(f"signal file {path} does not exist")
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(path.read_text())
            return PpgSignal(np.asarray(data["samples"], dtype=np.float64), float(data["sample_rate_hz"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DataError(f"invalid signal JSON {path}: {exc}") from exc
    samples = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["sample_index", "intensity"]:
            raise DataError(f"{path}: expected header 'sample_index,intensity'")
        for row in reader:
            if not row:
                continue
            try:
                samples.append(float(row[1]))
            except (IndexError, ValueError) as exc:
                raise DataError(f"{path}: malformed row {row!r}") from exc
    sidecar = _sidecar_path(path)
    if not sidecar.exists():
        raise DataError(f"missing sample-rate sidecar {sidecar}")
    try:
        rate = float(json.loads(sidecar.read_text())["sample_rate_hz"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"invalid sidecar {sidecar}: {exc}") from exc
    if not samples:
        raise DataError(f"{path}: no samples")
    return PpgSignal(np.asarray(samples), rate)
