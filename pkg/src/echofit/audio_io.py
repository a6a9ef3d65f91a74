"""Float WAV and raw-sample file handling."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import ContractError


def write_wav(path: str | Path, channels: np.ndarray, sample_rate: int) -> None:
    """Write 32-bit-float PCM WAV; ``channels`` is (M, N) or (N,)."""
    arr = np.asarray(channels, dtype=np.float32)
    if arr.ndim == 2:
        arr = arr.T  # scipy expects (frames, channels)
    elif arr.ndim != 1:
        raise ContractError(f"channels must be 1-D or 2-D, got shape {arr.shape}")
    wavfile.write(str(path), int(sample_rate), arr)


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a WAV file as float64 (M, N) channels plus the sample rate."""
    sample_rate, data = wavfile.read(str(path))
    if data.dtype == np.int16:
        data = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        data = data.astype(np.float64) / 2147483648.0
    else:
        data = data.astype(np.float64)
    if data.ndim == 1:
        data = data[None, :]
    else:
        data = data.T
    return data, int(sample_rate)


def write_raw(path: str | Path, samples: np.ndarray, sample_rate: int) -> None:
    """Raw little-endian float32 samples plus a JSON sidecar describing them."""
    arr = np.atleast_2d(np.asarray(samples, dtype="<f4"))
    Path(path).write_bytes(arr.tobytes(order="C"))
    sidecar = {
        "sample_rate": int(sample_rate),
        "channels": int(arr.shape[0]),
        "length": int(arr.shape[1]),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True))


def read_raw(path: str | Path) -> tuple[np.ndarray, int]:
    sidecar = json.loads(Path(str(path) + ".json").read_text())
    flat = np.frombuffer(Path(path).read_bytes(), dtype="<f4")
    arr = flat.reshape(sidecar["channels"], sidecar["length"]).astype(np.float64)
    return arr, int(sidecar["sample_rate"])
