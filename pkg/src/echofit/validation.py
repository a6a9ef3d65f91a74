"""Input-validation helpers used by the estimator-style classes and DSP functions."""

from __future__ import annotations

import numpy as np

from .errors import ContractError


def as_mono(x, name: str = "signal") -> np.ndarray:
    """Coerce to a finite 1-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ContractError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains non-finite values")
    return arr


def as_channels(x, n_channels: int | None = None, name: str = "channels") -> np.ndarray:
    """Coerce to a finite 2-D (n_channels, n_samples) float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ContractError(f"{name} must be 2-D (channels, samples), got shape {arr.shape}")
    if n_channels is not None and arr.shape[0] != n_channels:
        raise ContractError(f"{name} must have {n_channels} channels, got {arr.shape[0]}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains non-finite values")
    return arr


def as_feature_batch(X, n_steps: int, n_bins: int, name: str = "X") -> np.ndarray:
    """Coerce to (n_samples, n_steps, n_bins) float64; accepts a single matrix."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3 or arr.shape[1:] != (n_steps, n_bins):
        raise ContractError(
            f"{name} must have shape (n, {n_steps}, {n_bins}), got {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} contains non-finite values")
    return arr


def check_positive(value: float, name: str) -> float:
    if not value > 0:
        raise ContractError(f"{name} must be positive, got {value}")
    return float(value)
