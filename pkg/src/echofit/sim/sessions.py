"""Convenience builders for the scene shapes the pipeline is exercised on."""

from __future__ import annotations

import numpy as np

from ..emission import EmissionSpec
from ..errors import ConfigError
from .geometry import ArrayGeometry
from .kinematics import (
    ACTION_CATALOG,
    CANONICAL_USER,
    ConstantVelocityTrajectory,
    DailyActivityTrajectory,
    RandomWalkTrajectory,
    USER_ROSTER,
    UserProfile,
    realize_schedule,
)
from .scene import MoverSpec, SceneSpec, noise_std_for_snr

DEFAULT_STATICS = [(0.004, 0.35), (0.011, 0.20)]  # wall / ceiling style returns


def build_exercise_scene(
    action: str,
    user: str | UserProfile,
    n_reps: int,
    n_sets: int = 1,
    seed: int = 0,
    azimuth_deg: float = 0.0,
    elevation_deg: float = 0.0,
    range_m: float = 1.5,
    reflectivity: float = 0.25,
    snr_db: float | None = 20.0,
    lead_in_s: float = 2.5,
    set_rest_s: float = 9.0,
    geometry: ArrayGeometry | None = None,
    statics: list[tuple[float, float]] | None = None,
    emission: EmissionSpec | None = None,
) -> SceneSpec:
    """One user exercising on a fixed bearing, plus room clutter and noise."""
    if action not in ACTION_CATALOG:
        raise ConfigError(f"unknown action {action!r}; catalog has {sorted(ACTION_CATALOG)}")
    profile = USER_ROSTER[user] if isinstance(user, str) else user
    emission = emission or EmissionSpec()
    rng = np.random.default_rng(np.random.PCG64(seed))
    trajectory = realize_schedule(
        ACTION_CATALOG[action], profile, n_reps=n_reps, n_sets=n_sets,
        lead_in_s=lead_in_s, set_rest_s=set_rest_s, rng=rng,
    )
    mover = MoverSpec(
        azimuth_deg=azimuth_deg, elevation_deg=elevation_deg, range_m=range_m,
        reflectivity=reflectivity, trajectory=trajectory,
        action_id=action, user_id=profile.name,
    )
    noise = 0.0 if snr_db is None else noise_std_for_snr(snr_db, reflectivity, emission)
    return SceneSpec(
        geometry=geometry or ArrayGeometry(),
        statics=list(DEFAULT_STATICS if statics is None else statics),
        movers=[mover],
        noise_std=noise,
        seed=seed,
    )


def canonical_template_scene(action: str, n_reps: int, seed: int = 0, **kwargs) -> SceneSpec:
    """Jitter-free coach-style rendition used to build action templates."""
    return build_exercise_scene(action, CANONICAL_USER, n_reps, seed=seed, **kwargs)


def build_static_scene(
    seed: int = 0,
    noise_std: float = 0.003,
    statics: list[tuple[float, float]] | None = None,
    geometry: ArrayGeometry | None = None,
) -> SceneSpec:
    """Furniture and walls only; the no-motion null case."""
    return SceneSpec(
        geometry=geometry or ArrayGeometry(),
        statics=list(DEFAULT_STATICS if statics is None else statics),
        noise_std=noise_std,
        seed=seed,
    )


def build_walker_scene(
    duration_s: float,
    seed: int = 0,
    azimuth_deg: float = 70.0,
    range_m: float = 3.0,
    reflectivity: float = 0.18,
    rms_speed_mps: float = 0.5,
    snr_db: float | None = 20.0,
    geometry: ArrayGeometry | None = None,
    emission: EmissionSpec | None = None,
) -> SceneSpec:
    """Aperiodic strolling interferer, no exerciser."""
    emission = emission or EmissionSpec()
    walker = MoverSpec(
        azimuth_deg=azimuth_deg, elevation_deg=0.0, range_m=range_m,
        reflectivity=reflectivity,
        trajectory=RandomWalkTrajectory(duration_s, rms_speed_mps, seed=seed + 17),
    )
    noise = 0.0 if snr_db is None else noise_std_for_snr(snr_db, reflectivity, emission)
    return SceneSpec(
        geometry=geometry or ArrayGeometry(),
        statics=list(DEFAULT_STATICS),
        interferers=[walker],
        noise_std=noise,
        seed=seed,
    )


def build_nonfitness_scene(
    duration_s: float,
    seed: int = 0,
    azimuth_deg: float = 40.0,
    range_m: float = 3.0,
    reflectivity: float = 0.2,
    snr_db: float | None = 20.0,
    geometry: ArrayGeometry | None = None,
    emission: EmissionSpec | None = None,
) -> SceneSpec:
    """Someone going about their day near the device: sit, walk, sweep, fidget."""
    emission = emission or EmissionSpec()
    person = MoverSpec(
        azimuth_deg=azimuth_deg, elevation_deg=0.0, range_m=range_m,
        reflectivity=reflectivity,
        trajectory=DailyActivityTrajectory(duration_s, seed=seed + 23),
    )
    noise = 0.0 if snr_db is None else noise_std_for_snr(snr_db, reflectivity, emission)
    return SceneSpec(
        geometry=geometry or ArrayGeometry(),
        statics=list(DEFAULT_STATICS),
        interferers=[person],
        noise_std=noise,
        seed=seed,
    )


def add_walking_interferer(
    scene: SceneSpec,
    duration_s: float,
    azimuth_deg: float = 80.0,
    range_m: float = 2.5,
    reflectivity: float = 0.12,
    rms_speed_mps: float = 0.6,
) -> SceneSpec:
    scene.interferers.append(
        MoverSpec(
            azimuth_deg=azimuth_deg, elevation_deg=0.0, range_m=range_m,
            reflectivity=reflectivity,
            trajectory=RandomWalkTrajectory(duration_s, rms_speed_mps, seed=scene.seed + 101),
        )
    )
    return scene


def build_constant_velocity_scene(
    speed_mps: float,
    duration_s: float = 2.0,
    seed: int = 0,
    azimuth_deg: float = 0.0,
    elevation_deg: float = 0.0,
    range_m: float = 2.5,
    reflectivity: float = 0.25,
    noise_std: float = 0.0,
    statics: list[tuple[float, float]] | None = None,
    move_start_s: float = 0.0,
    geometry: ArrayGeometry | None = None,
) -> SceneSpec:
    """Uniform radial approach, the analytic Doppler oracle case."""
    mover = MoverSpec(
        azimuth_deg=azimuth_deg, elevation_deg=elevation_deg, range_m=range_m,
        reflectivity=reflectivity,
        trajectory=ConstantVelocityTrajectory(speed_mps, move_start_s, duration_s),
    )
    return SceneSpec(
        geometry=geometry or ArrayGeometry(),
        statics=list([] if statics is None else statics),
        movers=[mover],
        noise_std=noise_std,
        seed=seed,
    )
