"""Direction finding and delay-sum beamforming for the circular array.

The source sits in the far field, so one unit direction vector explains all
fifteen pairwise delays; a linear least squares on the in-plane components
recovers azimuth, and elevation follows from the projected length. A planar
array cannot tell up from down, so elevation is reported in [0, 90] degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DelayUndefinedError
from .sim.geometry import ArrayGeometry, DEFAULT_SPEED_OF_SOUND
from .validation import as_channels, as_mono

DEFAULT_BAND_HZ = (18_400.0, 21_600.0)


@dataclass(frozen=True)
class Direction:
    azimuth_deg: float
    elevation_deg: float
    azimuth_indeterminate: bool = False
    residual: float = 0.0

    def __post_init__(self):
        if not -180.0 <= self.azimuth_deg < 180.0 + 1e-9:
            raise ContractError("azimuth_deg must lie in [-180, 180)")
        if not 0.0 <= self.elevation_deg <= 90.0 + 1e-9:
            raise ContractError("elevation_deg must lie in [0, 90]")


def gcc_phat(
    a: np.ndarray,
    b: np.ndarray,
    max_lag: int,
    sample_rate: int = 44_100,
    band_hz: tuple[float, float] | None = DEFAULT_BAND_HZ,
) -> float:
    """Delay of ``b`` relative to ``a`` in (fractional) samples.

    Positive result means ``b`` is a delayed copy of ``a``. The cross-spectrum
    is whitened (phase transform); restricting the whitened spectrum to the
    emission band keeps out-of-band noise from diluting the peak. Parabolic
    interpolation around the integer peak gives sub-sample precision.
    """
    xa, xb = as_mono(a, "a"), as_mono(b, "b")
    if xa.shape != xb.shape:
        raise ContractError("signals must have equal length")
    if max_lag < 1 or len(xa) < 4 * max_lag:
        raise ContractError("need len(signal) >= 4 * max_lag and max_lag >= 1")
    n = 2 * len(xa)
    fa = np.fft.rfft(xa, n)
    fb = np.fft.rfft(xb, n)
    cross = fb * np.conj(fa)
    mag = np.abs(cross)
    if not np.any(mag > 1e-12 * max(1.0, mag.max())) or mag.max() == 0.0:
        raise DelayUndefinedError("cross-spectrum has no usable energy")
    white = cross / np.maximum(mag, 1e-30)
    if band_hz is not None:
        freqs = np.arange(len(white)) * sample_rate / n
        white[(freqs < band_hz[0]) | (freqs > band_hz[1])] = 0.0
        if not np.any(white != 0):
            raise DelayUndefinedError("no cross-spectrum energy inside the band")
    cc = np.fft.irfft(white, n)
    lags = np.concatenate([np.arange(-max_lag, 0), np.arange(0, max_lag + 1)])
    vals = np.concatenate([cc[-max_lag:], cc[:max_lag + 1]])
    k = int(np.argmax(vals))
    delay = float(lags[k])
    if 0 < k < len(vals) - 1:
        y0, y1, y2 = vals[k - 1], vals[k], vals[k + 1]
        denom = y0 - 2 * y1 + y2
        if abs(denom) > 1e-18:
            delta = 0.5 * (y0 - y2) / denom
            delay += float(np.clip(delta, -1.0, 1.0))
    return delay


def pairwise_delays(
    channels: np.ndarray,
    geometry: ArrayGeometry,
    sample_rate: int = 44_100,
    c_mps: float = DEFAULT_SPEED_OF_SOUND,
) -> tuple[np.ndarray, np.ndarray]:
    """GCC-PHAT delay (seconds) for every unordered microphone pair.

    Returns (pairs, delays); ``delays[k]`` is the arrival delay of the second
    mic of the pair relative to the first.
    """
    chans = as_channels(channels, geometry.n_mics)
    max_lag = int(np.ceil(geometry.max_pair_delay_s(c_mps) * sample_rate)) + 2
    pairs = [(i, j) for i in range(geometry.n_mics) for j in range(i + 1, geometry.n_mics)]
    delays = np.array([
        gcc_phat(chans[i], chans[j], max_lag, sample_rate) / sample_rate
        for i, j in pairs
    ])
    return np.array(pairs), delays


def estimate_doa(
    channels: np.ndarray,
    geometry: ArrayGeometry,
    sample_rate: int = 44_100,
    c_mps: float = DEFAULT_SPEED_OF_SOUND,
    indeterminate_below: float = 0.05,
) -> Direction:
    """Least-squares far-field direction from the 15 pairwise delays.

    A wavefront from unit direction u reaches mic m sooner by (q_m . u)/c, so
    each pair gives one linear equation in the in-plane components of u. The
    out-of-plane component is |u| completion; directly overhead every delay
    vanishes and the azimuth is flagged indeterminate.
    """
    pairs, delays = pairwise_delays(channels, geometry, sample_rate, c_mps)
    mics = geometry.mic_positions()
    a_mat = (mics[pairs[:, 0], :2] - mics[pairs[:, 1], :2]) / c_mps
    sol, res, rank, _ = np.linalg.lstsq(a_mat, delays, rcond=None)
    ux, uy = float(sol[0]), float(sol[1])
    planar = float(np.hypot(ux, uy))
    residual = float(np.sqrt(res[0])) if res.size else 0.0
    if planar < indeterminate_below or rank < 2:
        return Direction(0.0, 90.0, azimuth_indeterminate=True, residual=residual)
    azimuth = float(np.degrees(np.arctan2(uy, ux)))
    if azimuth >= 180.0:
        azimuth -= 360.0
    elevation = float(np.degrees(np.arccos(min(planar, 1.0))))
    return Direction(azimuth, elevation, azimuth_indeterminate=False, residual=residual)


def delay_set(
    direction: Direction,
    geometry: ArrayGeometry,
    c_mps: float = DEFAULT_SPEED_OF_SOUND,
) -> np.ndarray:
    """Steering delays: r * cos(azimuth - mic azimuth) * cos(elevation) / c."""
    az = np.deg2rad(direction.azimuth_deg)
    el = np.deg2rad(direction.elevation_deg)
    phis = np.deg2rad(geometry.azimuths_deg)
    return geometry.radius_m * np.cos(az - phis) * np.cos(el) / c_mps


def fractional_delay(x: np.ndarray, delay_samples: float) -> np.ndarray:
    """Delay by a fractional number of samples via an FFT phase ramp.

    Exact for band-limited content, which is all the Doppler chain carries;
    zero padding absorbs the circular wrap-around.
    """
    arr = as_mono(x)
    if len(arr) == 0 or delay_samples == 0.0:
        return arr.copy()
    pad = int(np.ceil(abs(delay_samples))) + 8
    padded = np.pad(arr, (pad, pad))
    n = len(padded)
    spec = np.fft.rfft(padded)
    k = np.arange(len(spec))
    spec *= np.exp(-2j * np.pi * k * delay_samples / n)
    if n % 2 == 0:
        spec[-1] = 0.0  # Nyquist bin cannot carry a fractional shift
    return np.fft.irfft(spec, n)[pad:pad + len(arr)]


def beamform(
    channels: np.ndarray,
    delays_s: np.ndarray,
    sample_rate: int = 44_100,
) -> np.ndarray:
    """Delay-sum: align each channel by its steering delay and average.

    A channel that heard the wavefront early (positive steering delay) is
    delayed by that amount so all channels line up; the sum is divided by
    the channel count for unit gain toward the steered direction.
    """
    chans = as_channels(channels)
    delays_s = np.asarray(delays_s, dtype=np.float64)
    if delays_s.shape != (chans.shape[0],):
        raise ContractError("need one steering delay per channel")
    out = np.zeros(chans.shape[1])
    for ch, d in zip(chans, delays_s):
        out += fractional_delay(ch, d * sample_rate)
    return out / chans.shape[0]
