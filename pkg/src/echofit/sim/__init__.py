"""Synthetic acoustic scenes with analytic ground truth."""

from .geometry import (
    ArrayGeometry,
    DEFAULT_SPEED_OF_SOUND,
    center_geometry,
    direction_unit_vector,
    doppler_shift,
    uniform_circular_azimuths_deg,
)
from .kinematics import (
    ACTION_CATALOG,
    ActionKinematics,
    CANONICAL_USER,
    ConstantVelocityTrajectory,
    DailyActivityTrajectory,
    MAX_RADIAL_SPEED_MPS,
    RandomWalkTrajectory,
    RepetitionPhase,
    RepetitionTrajectory,
    USER_ROSTER,
    UserProfile,
    jitter_variant,
    realize_schedule,
)
from .scene import (
    MoverSpec,
    MultiChannelBuffer,
    SceneSpec,
    ScriptEntry,
    load_scene,
    noise_std_for_snr,
    reflected_power,
    render_scene,
    save_scene,
    scene_from_json,
    scene_to_json,
)
from .sessions import (
    add_walking_interferer,
    build_nonfitness_scene,
    build_constant_velocity_scene,
    build_exercise_scene,
    build_static_scene,
    build_walker_scene,
    canonical_template_scene,
)
from .dataset import make_dataset, plan_dataset, session_duration_s, total_reps

__all__ = [name for name in dir() if not name.startswith("_")]
