"""Motion detection and the carrier-removal front end.

Two-step gate: a cheap once-per-10 s probe looks for Doppler sidebands around
each carrier; once motion exists, a sliding autocorrelation over the Doppler
energy envelope decides whether the motion repeats like exercise does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve, firwin
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .emission import EmissionSpec
from .errors import ContractError, DegenerateSignalError
from .validation import as_channels, as_mono

DEFAULT_BAND_HZ = (18_500.0, 21_500.0)
# mean sideband magnitude (normalized per carrier amplitude) separating the
# noise-only probes from >= 0.5 m/s movers; calibrated on rendered scenes
DEFAULT_PEAK_THRESHOLD = 2e-3


# --- probe-based motion detection -------------------------------------------

@dataclass(frozen=True)
class MotionDecision:
    motion: bool
    mean_peak: float
    peaks: np.ndarray  # (n_mics * n_components * 4,) normalized magnitudes


def _side_peaks(mag: np.ndarray, start: int, step: int, limit: int, count: int) -> list[float]:
    """Nearest ``count`` local maxima walking from ``start`` by ``step``."""
    picked: list[float] = []
    idx = start
    candidates: list[float] = []
    while 0 < idx < len(mag) - 1 and abs(idx - start) <= limit and len(picked) < count:
        if mag[idx] >= mag[idx - 1] and mag[idx] >= mag[idx + 1]:
            picked.append(float(mag[idx]))
        else:
            candidates.append(float(mag[idx]))
        idx += step
    # monotone stretch with too few maxima: fall back to the largest bins so
    # the probe always yields the same peak count
    candidates.sort(reverse=True)
    while len(picked) < count and candidates:
        picked.append(candidates.pop(0))
    while len(picked) < count:
        picked.append(0.0)
    return picked


def detect_motion(
    frames: np.ndarray,
    emission: EmissionSpec | None = None,
    peak_threshold: float = DEFAULT_PEAK_THRESHOLD,
    search_hz: float = 300.0,
    peaks_per_side: int = 2,
) -> MotionDecision:
    """Probe decision from one second of every microphone.

    Per carrier and microphone, the two nearest spectral local maxima on each
    side of the carrier bin (carrier and immediate neighbors excluded) are
    collected; their average, normalized by frame length times the emitted
    component amplitude, is compared against the threshold. Six mics, five
    carriers, two sides and two peaks give 120 values per probe.
    """
    emission = emission or EmissionSpec()
    chans = as_channels(frames, name="probe frames")
    n = chans.shape[1]
    if n < emission.sample_rate // 2:
        raise ContractError("probe frames must cover ~1 s of audio")
    fs = emission.sample_rate
    scale = emission.peak_scale()
    search_bins = int(round(search_hz * n / fs))

    peaks: list[float] = []
    for ch in chans:
        mag = np.abs(np.fft.rfft(ch))
        for f, a, _ in emission.components:
            carrier = int(round(f * n / fs))
            norm = n * a * scale
            for step in (-1, +1):
                start = carrier + step * 2  # skip carrier bin and +-1
                side = _side_peaks(mag, start, step, search_bins, peaks_per_side)
                peaks.extend(p / norm for p in side)
    arr = np.array(peaks)
    mean_peak = float(arr.mean())
    return MotionDecision(motion=mean_peak > peak_threshold, mean_peak=mean_peak, peaks=arr)


# --- band-pass + spectral subtraction ----------------------------------------

def design_bandpass(
    sample_rate: int = 44_100,
    band_hz: tuple[float, float] = DEFAULT_BAND_HZ,
    transition_hz: float = 500.0,
    stop_atten_db: float = 60.0,
) -> np.ndarray:
    """Linear-phase FIR whose stopband edges sit ``transition_hz`` outside the band."""
    beta = 0.1102 * (stop_atten_db - 8.7)
    numtaps = int(np.ceil((stop_atten_db - 7.95)
                          / (2.285 * 2 * np.pi * transition_hz / sample_rate)))
    numtaps += 1 - numtaps % 2  # odd length centers the group delay
    cutoffs = [band_hz[0] - transition_hz / 2.0, band_hz[1] + transition_hz / 2.0]
    return firwin(numtaps, cutoffs, fs=sample_rate, pass_zero=False,
                  window=("kaiser", beta))


def apply_bandpass(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Zero-phase application (symmetric taps, centered convolution)."""
    return fftconvolve(x, taps, mode="same")


def stft(x: np.ndarray, frame: int, hop: int) -> np.ndarray:
    """(n_frames, frame//2 + 1) complex spectra with a periodic Hann window."""
    n = len(x)
    n_frames = max(1, int(np.ceil(max(n - frame, 0) / hop)) + 1)
    padded = np.zeros((n_frames - 1) * hop + frame)
    padded[:n] = x
    idx = np.arange(frame)[None, :] + hop * np.arange(n_frames)[:, None]
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(frame) / frame)
    return np.fft.rfft(padded[idx] * window[None, :], axis=1)


def istft(spectra: np.ndarray, frame: int, hop: int, length: int) -> np.ndarray:
    """Weighted overlap-add inverse of :func:`stft`."""
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(frame) / frame)
    n_frames = spectra.shape[0]
    total = (n_frames - 1) * hop + frame
    y = np.zeros(total)
    wsum = np.zeros(total)
    frames = np.fft.irfft(spectra, n=frame, axis=1)
    for k in range(n_frames):
        y[k * hop:k * hop + frame] += frames[k] * window
        wsum[k * hop:k * hop + frame] += window**2
    good = wsum > 1e-12
    y[good] /= wsum[good]
    return y[:length]


@dataclass
class DopplerSignal:
    """Band-passed, carrier-subtracted signal; only motion sidebands remain."""

    samples: np.ndarray
    sample_rate: int
    source: str = "mic"


class SpectralSubtractor(TransformerMixin, BaseEstimator):
    """Remove the static carrier magnitudes from short-time spectra.

    ``fit`` learns one per-channel magnitude template (the per-bin median over
    the opening ``template_s`` seconds, assumed motion-free); ``transform``
    subtracts it, clamps to the per-frame noise floor, reattaches the phase
    and resynthesizes. Phase is untouched, so inter-channel delays survive
    for direction finding.
    """

    def __init__(self, sample_rate: int = 44_100, band_hz: tuple[float, float] = DEFAULT_BAND_HZ,
                 frame: int = 4096, hop: int = 1024, template_s: float = 2.0,
                 floor_percentile: float = 10.0, transition_hz: float = 500.0,
                 stop_atten_db: float = 60.0):
        self.sample_rate = sample_rate
        self.band_hz = band_hz
        self.frame = frame
        self.hop = hop
        self.template_s = template_s
        self.floor_percentile = floor_percentile
        self.transition_hz = transition_hz
        self.stop_atten_db = stop_atten_db

    def _band_slice(self) -> slice:
        lo = int(np.floor(self.band_hz[0] * self.frame / self.sample_rate))
        hi = int(np.ceil(self.band_hz[1] * self.frame / self.sample_rate)) + 1
        return slice(lo, hi)

    def _analyze(self, ch: np.ndarray) -> np.ndarray:
        # pad so every content sample gets full window coverage; without it the
        # overlap-add inverse divides by vanishing weights at the edges
        padded = np.pad(apply_bandpass(ch, self.taps_), (self.frame, self.frame))
        return stft(padded, self.frame, self.hop)

    def _template_frames(self) -> slice:
        first = int(np.ceil(self.frame / self.hop))
        last = int((self.frame + self.template_s * self.sample_rate - self.frame) // self.hop)
        return slice(first, max(last, first + 1))

    def fit(self, X, y=None):
        chans = np.atleast_2d(np.asarray(X, dtype=np.float64))
        self.taps_ = design_bandpass(self.sample_rate, self.band_hz,
                                     self.transition_hz, self.stop_atten_db)
        band = self._band_slice()
        frames = self._template_frames()
        templates = []
        for ch in chans:
            spectra = self._analyze(ch)
            templates.append(np.median(np.abs(spectra[frames, band]), axis=0))
        self.templates_ = np.array(templates)
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "templates_"):
            raise NotFittedError("SpectralSubtractor.fit must run first")
        chans = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if chans.shape[0] != self.templates_.shape[0]:
            raise ContractError(
                f"fitted on {self.templates_.shape[0]} channels, got {chans.shape[0]}"
            )
        band = self._band_slice()
        out = np.zeros_like(chans)
        n = chans.shape[1]
        for i, ch in enumerate(chans):
            spectra = self._analyze(ch)
            mag = np.abs(spectra[:, band])
            diff = mag - self.templates_[i][None, :]
            # noise floor: low percentile of what survives subtraction in the
            # frame, so a quiet scene floors near zero instead of at the
            # carriers' leakage skirts
            floor = np.percentile(np.maximum(diff, 0.0), self.floor_percentile,
                                  axis=1, keepdims=True)
            cleaned = np.maximum(diff, floor)
            result = np.zeros_like(spectra)
            result[:, band] = cleaned * np.exp(1j * np.angle(spectra[:, band]))
            full = istft(result, self.frame, self.hop, n + 2 * self.frame)
            out[i] = full[self.frame:self.frame + n]
            # frames straddling the buffer edges see the carriers switch on and
            # off, which splatters across the band; blank that warm-up region
            guard = min(self.frame, n)
            out[i, :guard] = 0.0
            out[i, n - guard:] = 0.0
        return out


def bandpass_and_subtract(x: np.ndarray, sample_rate: int = 44_100,
                          source: str = "mic", **kwargs) -> DopplerSignal:
    """One-shot carrier removal for a single channel (template from its own start)."""
    mono = as_mono(x)
    if len(mono) == 0:
        return DopplerSignal(mono, sample_rate, source)
    sub = SpectralSubtractor(sample_rate=sample_rate, **kwargs).fit(mono)
    return DopplerSignal(sub.transform(mono)[0], sample_rate, source)


# --- repeatability ------------------------------------------------------------

def autocorrelation(x: np.ndarray, k: int) -> float:
    """Normalized autocorrelation at integer lag ``k`` over the valid overlap."""
    arr = as_mono(x)
    if not 0 <= k < len(arr):
        raise ContractError(f"lag {k} outside [0, {len(arr)})")
    mu = arr.mean()
    var = np.mean((arr - mu) ** 2)
    if var == 0:
        raise DegenerateSignalError("constant signal has no defined autocorrelation")
    d = arr - mu
    if k == 0:
        return 1.0
    return float(np.mean(d[:-k] * d[k:]) / var)


def autocorrelation_curve(x: np.ndarray, max_lag: int, biased: bool = False) -> np.ndarray:
    """R(0..max_lag) via FFT; same normalization as :func:`autocorrelation`.

    With ``biased`` the sums divide by N instead of the overlap length, which
    shrinks the wild long-lag estimates toward zero (the usual choice when
    hunting periodicity rather than estimating a model).
    """
    arr = as_mono(x)
    n = len(arr)
    if not 0 < max_lag < n:
        raise ContractError("need 0 < max_lag < len(x)")
    mu = arr.mean()
    var = np.mean((arr - mu) ** 2)
    if var == 0:
        raise DegenerateSignalError("constant signal has no defined autocorrelation")
    d = arr - mu
    size = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.fft.rfft(d, size)
    raw = np.fft.irfft(spec * np.conj(spec), size)[: max_lag + 1]
    counts = n if biased else n - np.arange(max_lag + 1)
    return raw / (counts * var)


def doppler_energy_envelope(x: np.ndarray, sample_rate: int,
                            frame_s: float = 0.01) -> tuple[np.ndarray, float]:
    """Per-frame sum of squared samples; returns (envelope, frame rate in Hz)."""
    arr = as_mono(x)
    frame = max(1, int(round(frame_s * sample_rate)))
    n_frames = len(arr) // frame
    env = (arr[: n_frames * frame].reshape(n_frames, frame) ** 2).sum(axis=1)
    return env, sample_rate / frame


def doppler_offset_series(
    x: np.ndarray,
    sample_rate: int = 44_100,
    emission: EmissionSpec | None = None,
    frame: int = 4096,
    hop_s: float = 0.01,
    search_hz: float = 350.0,
) -> tuple[np.ndarray, float]:
    """Signed mean Doppler offset (Hz) over time for a carrier-subtracted signal.

    Energy-weighted mean of (frequency - carrier) pooled across carriers; the
    relative regularizer pulls quiet frames to zero, so rests read as zero
    shift. Exercise flips the sign every half repetition, which is what the
    repeatability test keys on.
    """
    emission = emission or EmissionSpec()
    arr = as_mono(x)
    hop = max(1, int(round(hop_s * sample_rate)))
    spectra = stft(np.pad(arr, (frame, frame)), frame, hop)
    first = int(np.ceil(frame / hop))
    last = (len(arr) + frame) // hop
    power = np.abs(spectra[first:last + 1]) ** 2
    freqs = np.arange(power.shape[1]) * sample_rate / frame
    num = np.zeros(power.shape[0])
    den = np.zeros(power.shape[0])
    for f, _, _ in emission.components:
        sel = (freqs >= f - search_hz) & (freqs <= f + search_hz)
        num += power[:, sel] @ (freqs[sel] - f)
        den += power[:, sel].sum(axis=1)
    delta = 0.02 * den.max() if den.size and den.max() > 0 else 1.0
    return num / (den + delta), sample_rate / hop


@dataclass(frozen=True)
class RepeatabilityResult:
    fitness: bool
    onset_s: float | None
    peak_counts: list[int] = field(default_factory=list)


def count_periodic_peaks(window: np.ndarray, frame_rate: float,
                         min_lag_s: float = 0.5, max_lag_s: float = 12.0,
                         ac_threshold: float = 0.1,
                         min_separation_s: float = 0.25) -> int:
    """Significant autocorrelation extrema in the lag band.

    Genuine repetition shows up as correlation peaks at cycle multiples plus
    matching anti-correlation troughs between them; both count as periodicity
    evidence. Extrema closer than ``min_separation_s`` merge into one.
    """
    from scipy.signal import find_peaks

    lo = int(round(min_lag_s * frame_rate))
    hi = min(int(round(max_lag_s * frame_rate)), len(window) - 2)
    if hi <= lo:
        return 0
    try:
        r = autocorrelation_curve(window, hi + 1, biased=True)
    except DegenerateSignalError:
        return 0
    dist = max(1, int(round(min_separation_s * frame_rate)))
    count = 0
    for curve in (r, -r):
        peaks, _ = find_peaks(curve, height=ac_threshold, distance=dist)
        count += int(np.sum(peaks >= lo))
    return count


def repeatability_analysis(
    series: np.ndarray,
    frame_rate: float,
    window_s: float = 13.0,
    hop_s: float = 1.0,
    min_lag_s: float = 0.5,
    max_lag_s: float = 12.0,
    ac_threshold: float = 0.1,
    min_peaks: int = 4,
    refine_onset: bool = True,
    activity_frac: float = 0.1,
    smooth_s: float = 0.1,
) -> RepeatabilityResult:
    """Declare exercise when two consecutive windows each repeat strongly.

    ``series`` is the Doppler-shift stream from :func:`doppler_offset_series`
    (any per-frame motion reduction works). The onset is the first visible
    activity inside the first qualifying window (with ``refine_onset``),
    otherwise that window's start time.
    """
    x = as_mono(series, name="series")
    if smooth_s > 0:
        k = max(1, int(round(smooth_s * frame_rate)))
        x = np.convolve(x, np.ones(k) / k, mode="same")
    win = int(round(window_s * frame_rate))
    hop = max(1, int(round(hop_s * frame_rate)))
    if len(x) < win + hop:
        raise ContractError(
            f"series must cover >= {window_s + hop_s} s, got {len(x) / frame_rate:.1f} s"
        )
    counts = []
    for start in range(0, len(x) - win + 1, hop):
        counts.append(count_periodic_peaks(x[start:start + win], frame_rate,
                                           min_lag_s, max_lag_s, ac_threshold))
    for i in range(len(counts) - 1):
        if counts[i] > min_peaks and counts[i + 1] > min_peaks:
            onset = i * hop / frame_rate
            if refine_onset:
                window = np.abs(x[i * hop:i * hop + win])
                active = np.nonzero(window > activity_frac * window.max())[0]
                if active.size:
                    onset += active[0] / frame_rate
            return RepeatabilityResult(True, float(onset), counts)
    return RepeatabilityResult(False, None, counts)
