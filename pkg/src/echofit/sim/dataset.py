"""Labeled-corpus generation: rendered sessions plus a JSON-lines manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..audio_io import write_wav
from ..emission import EmissionSpec
from ..errors import ConfigError
from .kinematics import ACTION_CATALOG, USER_ROSTER
from .scene import SceneSpec, render_scene, save_scene
from .sessions import build_exercise_scene


@dataclass(frozen=True)
class SessionPlan:
    index: int
    action: str
    user: str
    n_reps: int
    seed: int


def plan_dataset(
    actions: list[str],
    users: list[str],
    reps_per_action: int,
    seed: int = 0,
    reps_per_session: int = 10,
) -> list[SessionPlan]:
    """Deterministic session plan; total repetitions = actions x users x reps."""
    if not actions or not users or reps_per_action < 1:
        raise ConfigError("need at least one action, one user and one repetition")
    plans = []
    idx = 0
    for action in actions:
        for user in users:
            remaining = reps_per_action
            while remaining > 0:
                n = min(reps_per_session, remaining)
                plans.append(SessionPlan(idx, action, user, n, seed=seed * 100_003 + idx))
                remaining -= n
                idx += 1
    return plans


def total_reps(plans: list[SessionPlan]) -> int:
    return sum(p.n_reps for p in plans)


def session_duration_s(scene: SceneSpec, tail_s: float = 2.0) -> float:
    script = scene.script()
    end = script[-1].end_s if script else 0.0
    return end + tail_s


def make_dataset(
    out_dir: str | Path,
    n_actions: int = 10,
    n_users: int = 6,
    reps_per_action: int = 20,
    seed: int = 0,
    reps_per_session: int = 10,
    emission: EmissionSpec | None = None,
    snr_db: float = 20.0,
) -> Path:
    """Render the catalog corpus to ``out_dir`` and return the manifest path.

    Deterministic: the same seed produces byte-identical audio and manifest.
    """
    actions = sorted(ACTION_CATALOG)[:n_actions]
    users = sorted(USER_ROSTER)[:n_users]
    if len(actions) < n_actions or len(users) < n_users:
        raise ConfigError(
            f"catalog has {len(ACTION_CATALOG)} actions and {len(USER_ROSTER)} users"
        )
    emission = emission or EmissionSpec()
    out_dir = Path(out_dir)
    (out_dir / "sessions").mkdir(parents=True, exist_ok=True)
    manifest_path = out_dir / "manifest.jsonl"

    plans = plan_dataset(actions, users, reps_per_action, seed=seed,
                         reps_per_session=reps_per_session)
    with open(manifest_path, "w", encoding="utf-8") as manifest:
        for plan in plans:
            scene = build_exercise_scene(
                plan.action, plan.user, n_reps=plan.n_reps, seed=plan.seed,
                snr_db=snr_db, emission=emission,
            )
            duration = session_duration_s(scene)
            audio, script = render_scene(scene, emission, duration)
            stem = f"s{plan.index:04d}"
            audio_path = out_dir / "sessions" / f"{stem}.wav"
            scene_path = out_dir / "sessions" / f"{stem}.scene.json"
            write_wav(audio_path, audio.channels, audio.sample_rate)
            save_scene(scene, scene_path)
            record = {
                "audio_path": str(audio_path.relative_to(out_dir)),
                "scene_path": str(scene_path.relative_to(out_dir)),
                "ground_truth": [
                    {
                        "action_id": e.action_id, "user_id": e.user_id,
                        "start_s": e.start_s, "end_s": e.end_s, "set_index": e.set_index,
                    }
                    for e in script
                ],
            }
            manifest.write(json.dumps(record, sort_keys=True) + "\n")
    return manifest_path
