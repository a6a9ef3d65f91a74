"""Declarative acoustic scenes rendered to multi-channel reflections.

Movers are point reflectors on a fixed bearing whose range varies with their
trajectory; each microphone sees the emission evaluated at a time-varying
round-trip delay, which produces Doppler shifts implicitly and exactly
(the emission has a closed form, so no resampling error enters the oracle).
Path gains are abstract reflectivities; no spreading loss is modeled, which
keeps channel amplitudes identical up to delay — exactly what the
beamforming gain law assumes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..emission import EmissionSpec
from ..errors import ConfigError
from .geometry import ArrayGeometry, DEFAULT_SPEED_OF_SOUND, direction_unit_vector
from .kinematics import (
    ConstantVelocityTrajectory,
    MAX_RADIAL_SPEED_MPS,
    RandomWalkTrajectory,
    RepetitionPhase,
    RepetitionTrajectory,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScriptEntry:
    action_id: str
    user_id: str
    start_s: float
    end_s: float
    set_index: int


@dataclass
class MoverSpec:
    """Point reflector on a fixed (azimuth, elevation, range) bearing."""

    azimuth_deg: float
    elevation_deg: float
    range_m: float
    reflectivity: float
    trajectory: object
    action_id: str = ""
    user_id: str = ""

    def validate(self, geometry: ArrayGeometry) -> None:
        if not 0.0 <= self.reflectivity <= 1.0:
            raise ConfigError("reflectivity must be in [0, 1]")
        if self.range_m <= 2.0 * geometry.radius_m:
            raise ConfigError("mover must sit in the array far-field (range > 2 * radius)")
        if self.trajectory.peak_speed() > MAX_RADIAL_SPEED_MPS + 1e-9:
            raise ConfigError("trajectory exceeds the 1.5 m/s radial speed bound")


@dataclass
class SceneSpec:
    geometry: ArrayGeometry = field(default_factory=ArrayGeometry)
    speed_of_sound: float = DEFAULT_SPEED_OF_SOUND
    statics: list[tuple[float, float]] = field(default_factory=list)  # (delay s, gain)
    movers: list[MoverSpec] = field(default_factory=list)
    interferers: list[MoverSpec] = field(default_factory=list)
    noise_std: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.speed_of_sound <= 0:
            raise ConfigError("speed_of_sound must be positive")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be >= 0")
        for delay, gain in self.statics:
            if delay < 0 or not 0.0 <= gain <= 1.0:
                raise ConfigError("static paths need delay >= 0 and gain in [0, 1]")
        for mover in [*self.movers, *self.interferers]:
            mover.validate(self.geometry)

    def script(self) -> list[ScriptEntry]:
        """Exact ground truth for the fitness movers (interferers excluded)."""
        entries = []
        for mover in self.movers:
            traj = mover.trajectory
            if isinstance(traj, RepetitionTrajectory):
                for rep in traj.reps:
                    entries.append(
                        ScriptEntry(mover.action_id, mover.user_id,
                                    rep.start_s, rep.end_s, rep.set_index)
                    )
        entries.sort(key=lambda e: e.start_s)
        for a, b in zip(entries, entries[1:]):
            if b.start_s < a.end_s:
                raise ConfigError("ground-truth repetitions overlap")
        return entries


@dataclass
class MultiChannelBuffer:
    channels: np.ndarray  # (M, N)
    sample_rate: int

    def __post_init__(self):
        self.channels = np.atleast_2d(np.asarray(self.channels, dtype=np.float64))

    @property
    def n_channels(self) -> int:
        return self.channels.shape[0]

    @property
    def duration_s(self) -> float:
        return self.channels.shape[1] / self.sample_rate


def _render_path(emission: EmissionSpec, t: np.ndarray, delay_s: np.ndarray | float,
                 gain: float, scale: float) -> np.ndarray:
    return gain * scale * emission.waveform_at(t - delay_s)


def render_scene(
    scene: SceneSpec,
    emission: EmissionSpec,
    duration_s: float,
) -> tuple[MultiChannelBuffer, list[ScriptEntry]]:
    """Render every reflection path plus noise; returns audio and ground truth."""
    script = scene.script()
    if script and script[-1].end_s > duration_s:
        raise ConfigError(
            f"script runs to {script[-1].end_s:.2f} s but duration is {duration_s} s"
        )
    return render_window(scene, emission, 0.0, duration_s), script


def render_window(
    scene: SceneSpec,
    emission: EmissionSpec,
    start_s: float,
    duration_s: float,
) -> MultiChannelBuffer:
    """Render ``[start_s, start_s + duration_s)`` of an ongoing scene."""
    scene.validate()
    fs = emission.sample_rate
    n = int(round(duration_s * fs))
    t = start_s + np.arange(n, dtype=np.float64) / fs
    mics = scene.geometry.mic_positions()
    scale = emission.peak_scale()
    c = scene.speed_of_sound

    channels = np.zeros((scene.geometry.n_mics, n))
    for delay, gain in scene.statics:
        if gain != 0.0:
            path = _render_path(emission, t, delay, gain, scale)
            channels += path[None, :]

    for mover in [*scene.movers, *scene.interferers]:
        if mover.reflectivity == 0.0:
            continue
        u = direction_unit_vector(mover.azimuth_deg, mover.elevation_deg)
        rng_t = mover.range_m - mover.trajectory.displacement(t)
        positions = rng_t[:, None] * u[None, :]  # (N, 3)
        for m in range(scene.geometry.n_mics):
            return_leg = np.linalg.norm(positions - mics[m][None, :], axis=1)
            delay_s = (rng_t + return_leg) / c
            channels[m] += _render_path(emission, t, delay_s, mover.reflectivity, scale)

    if scene.noise_std > 0:
        rng = np.random.default_rng(np.random.PCG64(scene.seed))
        for m in range(scene.geometry.n_mics):
            channels[m] += scene.noise_std * rng.standard_normal(n)

    return MultiChannelBuffer(channels, fs)


def reflected_power(reflectivity: float, emission: EmissionSpec) -> float:
    """Mean-square level of one mover's reflection in a channel."""
    amps = emission.amplitudes * emission.peak_scale() * reflectivity
    return float(np.sum(amps**2) / 2.0)


def noise_std_for_snr(snr_db: float, reflectivity: float, emission: EmissionSpec) -> float:
    """Per-channel Gaussian noise level giving the requested single-channel SNR."""
    p_sig = reflected_power(reflectivity, emission)
    return float(np.sqrt(p_sig / 10.0 ** (snr_db / 10.0)))


# --- JSON (de)serialization -------------------------------------------------

def _trajectory_to_json(traj) -> dict:
    if isinstance(traj, RepetitionTrajectory):
        return {
            "kind": "repetitions",
            "reps": [
                {
                    "start_s": r.start_s, "ext_s": r.ext_s, "hold_s": r.hold_s,
                    "ret_s": r.ret_s, "amplitude_m": r.amplitude_m,
                    "c1": r.c1, "c2": r.c2, "set_index": r.set_index,
                }
                for r in traj.reps
            ],
        }
    if isinstance(traj, ConstantVelocityTrajectory):
        return {
            "kind": "constant_velocity",
            "speed_mps": traj.speed_mps,
            "start_s": traj.start_s,
            "end_s": traj.end_s,
        }
    if isinstance(traj, RandomWalkTrajectory):
        return {
            "kind": "random_walk",
            "duration_s": traj.duration_s,
            "rms_speed_mps": traj.rms_speed_mps,
            "seed": traj.seed,
            "smoothing_s": traj.smoothing_s,
        }
    raise ConfigError(f"unknown trajectory type {type(traj)!r}")


def _trajectory_from_json(doc: dict):
    kind = doc.get("kind")
    if kind == "repetitions":
        reps = [
            RepetitionPhase(
                start_s=r["start_s"], ext_s=r["ext_s"], hold_s=r["hold_s"],
                ret_s=r["ret_s"], amplitude_m=r["amplitude_m"],
                c1=r["c1"], c2=r["c2"], set_index=r["set_index"],
            )
            for r in doc["reps"]
        ]
        return RepetitionTrajectory(reps)
    if kind == "constant_velocity":
        return ConstantVelocityTrajectory(doc["speed_mps"], doc["start_s"], doc["end_s"])
    if kind == "random_walk":
        return RandomWalkTrajectory(doc["duration_s"], doc["rms_speed_mps"], doc["seed"],
                                    smoothing_s=doc.get("smoothing_s", 0.6))
    raise ConfigError(f"unknown trajectory kind {kind!r}")


def _mover_to_json(m: MoverSpec) -> dict:
    return {
        "azimuth_deg": m.azimuth_deg,
        "elevation_deg": m.elevation_deg,
        "range_m": m.range_m,
        "reflectivity": m.reflectivity,
        "trajectory": _trajectory_to_json(m.trajectory),
        "action_id": m.action_id,
        "user_id": m.user_id,
    }


def _mover_from_json(doc: dict) -> MoverSpec:
    return MoverSpec(
        azimuth_deg=doc["azimuth_deg"],
        elevation_deg=doc["elevation_deg"],
        range_m=doc["range_m"],
        reflectivity=doc["reflectivity"],
        trajectory=_trajectory_from_json(doc["trajectory"]),
        action_id=doc.get("action_id", ""),
        user_id=doc.get("user_id", ""),
    )


def scene_to_json(scene: SceneSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "geometry": {
            "n_mics": scene.geometry.n_mics,
            "radius_m": scene.geometry.radius_m,
            "azimuths_deg": list(scene.geometry.azimuths_deg),
        },
        "speed_of_sound": scene.speed_of_sound,
        "statics": [list(s) for s in scene.statics],
        "movers": [_mover_to_json(m) for m in scene.movers],
        "interferers": [_mover_to_json(m) for m in scene.interferers],
        "noise_std": scene.noise_std,
        "seed": scene.seed,
        "script": [
            {
                "action_id": e.action_id, "user_id": e.user_id,
                "start_s": e.start_s, "end_s": e.end_s, "set_index": e.set_index,
            }
            for e in scene.script()
        ],
    }


def scene_from_json(doc: dict) -> SceneSpec:
    geo = doc.get("geometry", {})
    geometry = ArrayGeometry(
        n_mics=geo.get("n_mics", 6),
        radius_m=geo.get("radius_m", 0.05),
        azimuths_deg=np.array(geo["azimuths_deg"]) if "azimuths_deg" in geo else None,
    )
    scene = SceneSpec(
        geometry=geometry,
        speed_of_sound=doc.get("speed_of_sound", DEFAULT_SPEED_OF_SOUND),
        statics=[tuple(s) for s in doc.get("statics", [])],
        movers=[_mover_from_json(m) for m in doc.get("movers", [])],
        interferers=[_mover_from_json(m) for m in doc.get("interferers", [])],
        noise_std=doc.get("noise_std", 0.0),
        seed=doc.get("seed", 0),
    )
    scene.validate()
    return scene


def load_scene(path) -> SceneSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return scene_from_json(json.load(fh))


def save_scene(scene: SceneSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene_to_json(scene), fh, indent=2)
