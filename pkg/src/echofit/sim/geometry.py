"""Microphone-array geometry and the reflection-path physics helpers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, ContractError

DEFAULT_SPEED_OF_SOUND = 340.0


def doppler_shift(v_mps: float, f_hz: float, c_mps: float = DEFAULT_SPEED_OF_SOUND) -> float:
    """Frequency shift of a reflection off a target moving radially at ``v``.

    Emitter and receiver are collocated, so the shift is ``2 v f / c``;
    positive ``v`` means the target approaches the array.
    """
    if c_mps <= 0:
        raise ContractError("speed of sound must be positive")
    return 2.0 * v_mps * f_hz / c_mps


def uniform_circular_azimuths_deg(n_mics: int) -> np.ndarray:
    """Azimuths of a uniform circular array: ``(-(M-1)/2 + m - 1) * 360/M``.

    For M = 6 this yields {-150, -90, -30, 30, 90, 150} degrees, i.e. a
    regular hexagon straddling the x-axis.
    """
    m = np.arange(1, n_mics + 1, dtype=np.float64)
    return (-(n_mics - 1) / 2.0 + m - 1.0) * 360.0 / n_mics


@dataclass(frozen=True)
class ArrayGeometry:
    """Circular microphone array in the z = 0 plane.

    ``radius_m`` is the circumradius; for a regular hexagon it equals the
    side length, so a 5 cm mic spacing gives a 5 cm radius.
    """

    n_mics: int = 6
    radius_m: float = 0.05
    azimuths_deg: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n_mics < 1:
            raise ConfigError("n_mics must be >= 1")
        if self.radius_m < 0:
            raise ConfigError("radius_m must be >= 0")
        if self.azimuths_deg is None:
            object.__setattr__(
                self, "azimuths_deg", uniform_circular_azimuths_deg(self.n_mics)
            )
        else:
            az = np.asarray(self.azimuths_deg, dtype=np.float64)
            if az.shape != (self.n_mics,):
                raise ConfigError("azimuths_deg must have one entry per microphone")
            object.__setattr__(self, "azimuths_deg", az)

    def mic_positions(self) -> np.ndarray:
        """(M, 3) cartesian positions."""
        az = np.deg2rad(self.azimuths_deg)
        return np.column_stack(
            [self.radius_m * np.cos(az), self.radius_m * np.sin(az), np.zeros_like(az)]
        )

    def max_pair_delay_s(self, c_mps: float = DEFAULT_SPEED_OF_SOUND) -> float:
        return 2.0 * self.radius_m / c_mps


def center_geometry() -> ArrayGeometry:
    """Single virtual microphone at the array center (ideal beamformed feed)."""
    return ArrayGeometry(n_mics=1, radius_m=0.0, azimuths_deg=np.array([0.0]))


def direction_unit_vector(azimuth_deg: float, elevation_deg: float) -> np.ndarray:
    az = np.deg2rad(azimuth_deg)
    el = np.deg2rad(elevation_deg)
    return np.array(
        [np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)]
    )
