"""Multi-tone ultrasonic emission and the energy-saving probe schedule.

The probe waveform is a sum of sinusoids parked just below the hardware
Nyquist band, high enough to be inaudible and low enough that commodity
speakers still reproduce it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .validation import check_positive

INAUDIBLE_FLOOR_HZ = 18_000.0
DEFAULT_SAMPLE_RATE = 44_100
DEFAULT_FREQUENCIES_HZ = (19_000.0, 19_500.0, 20_000.0, 20_500.0, 21_000.0)

PROBE_PERIOD_S = 10.0
PROBE_LENGTH_S = 1.0


@dataclass(frozen=True)
class EmissionSpec:
    """Sinusoid bank: (frequency Hz, amplitude, initial phase rad) triples.

    Amplitudes default to an equal 1/5 split so every carrier contributes the
    same sideband energy after reflection.
    """

    components: tuple[tuple[float, float, float], ...] = field(
        default_factory=lambda: tuple((f, 0.2, 0.0) for f in DEFAULT_FREQUENCIES_HZ)
    )
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        check_positive(self.sample_rate, "sample_rate")
        if not self.components:
            raise ConfigError("emission needs at least one component")
        nyquist = self.sample_rate / 2.0
        prev = -math.inf
        for f, a, _ in self.components:
            if not INAUDIBLE_FLOOR_HZ < f < nyquist:
                raise ConfigError(
                    f"component at {f} Hz outside the inaudible band "
                    f"({INAUDIBLE_FLOOR_HZ} Hz, {nyquist} Hz)"
                )
            if f <= prev:
                raise ConfigError("component frequencies must be strictly increasing")
            if a < 0:
                raise ConfigError("component amplitudes must be non-negative")
            prev = f

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([f for f, _, _ in self.components])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a, _ in self.components])

    @property
    def phases(self) -> np.ndarray:
        return np.array([p for _, _, p in self.components])

    def waveform_at(self, t: np.ndarray) -> np.ndarray:
        """Evaluate the continuous emission at arbitrary times (seconds)."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for f, a, p in self.components:
            if a != 0.0:
                out += a * np.sin(2.0 * np.pi * f * t + p)
        return out

    def peak_scale(self) -> float:
        """Factor applied after summation to keep samples within [-1, 1]."""
        total = float(self.amplitudes.sum())
        return 1.0 / total if total > 1.0 else 1.0


def synthesize_emission(spec: EmissionSpec, duration_s: float) -> np.ndarray:
    """Render ``round(duration * sample_rate)`` samples of the emission.

    The sum is peak-normalized only when the amplitude sum exceeds 1, so
    relative component levels are never disturbed.
    """
    check_positive(duration_s, "duration_s")
    n = int(round(duration_s * spec.sample_rate))
    t = np.arange(n, dtype=np.float64) / spec.sample_rate
    return spec.waveform_at(t) * spec.peak_scale()


def probe_schedule(now_s: float, period_s: float = PROBE_PERIOD_S,
                   length_s: float = PROBE_LENGTH_S) -> tuple[float, float]:
    """Next probe window ``[start, start + length)`` on the session cadence.

    The cadence is anchored to t = 0 of the session; a ``now`` exactly on a
    period boundary gets that boundary's window.
    """
    if now_s < 0:
        raise ConfigError("now_s must be >= 0")
    check_positive(period_s, "period_s")
    start = period_s * math.ceil(now_s / period_s)
    return (start, start + length_s)
