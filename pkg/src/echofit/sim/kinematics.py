"""Radial motion models for simulated exercisers and interferers.

A trajectory maps time to radial displacement toward the array (meters,
positive = closer). Exercise repetitions follow a raised-cosine stroke with a
warped phase ramp; the warp coefficients are where per-user "micro-action"
signatures live, so two users doing the same exercise produce measurably
different Doppler profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ConfigError

MAX_RADIAL_SPEED_MPS = 1.5


def _warp(u: np.ndarray, c1: float, c2: float) -> np.ndarray:
    """Monotone phase warp on [0, 1] with w(0) = 0, w(1) = 1 for |c1|+|c2| < 1."""
    return u + c1 * np.sin(np.pi * u) / np.pi + c2 * np.sin(2.0 * np.pi * u) / (2.0 * np.pi)


def _stroke(u: np.ndarray, c1: float, c2: float) -> np.ndarray:
    """Smooth 0 -> 1 displacement profile with warped timing."""
    return 0.5 * (1.0 - np.cos(np.pi * _warp(u, c1, c2)))


@dataclass(frozen=True)
class RepetitionPhase:
    """One realized repetition: extension, hold at full stroke, retraction."""

    start_s: float
    ext_s: float
    hold_s: float
    ret_s: float
    amplitude_m: float
    c1: float
    c2: float
    set_index: int

    @property
    def end_s(self) -> float:
        return self.start_s + self.ext_s + self.hold_s + self.ret_s


class RepetitionTrajectory:
    """Piecewise displacement profile over a realized repetition schedule."""

    def __init__(self, reps: list[RepetitionPhase]):
        if not reps:
            raise ConfigError("schedule needs at least one repetition")
        starts = [r.start_s for r in reps]
        ends = [r.end_s for r in reps]
        for i in range(1, len(reps)):
            if starts[i] < ends[i - 1]:
                raise ConfigError("repetitions overlap")
        self.reps = list(reps)
        self.end_s = ends[-1]

    def displacement(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for rep in self.reps:
            rel = t - rep.start_s
            ext_end = rep.ext_s
            hold_end = rep.ext_s + rep.hold_s
            ret_end = hold_end + rep.ret_s
            m = (rel > 0) & (rel < ext_end)
            if m.any():
                out[m] = rep.amplitude_m * _stroke(rel[m] / rep.ext_s, rep.c1, rep.c2)
            m = (rel >= ext_end) & (rel < hold_end)
            out[m] = rep.amplitude_m
            m = (rel >= hold_end) & (rel < ret_end)
            if m.any():
                u = (rel[m] - hold_end) / rep.ret_s
                out[m] = rep.amplitude_m * (1.0 - _stroke(u, rep.c1, rep.c2))
        return out

    def peak_speed(self) -> float:
        u = np.linspace(0.0, 1.0, 512)
        peak = 0.0
        for rep in self.reps:
            slope = np.max(np.gradient(_stroke(u, rep.c1, rep.c2), u))
            peak = max(
                peak,
                rep.amplitude_m * slope / rep.ext_s,
                rep.amplitude_m * slope / rep.ret_s,
            )
        return float(peak)


class ConstantVelocityTrajectory:
    """Straight radial approach/retreat at fixed speed inside [start, end]."""

    def __init__(self, speed_mps: float, start_s: float, end_s: float):
        if end_s <= start_s:
            raise ConfigError("end_s must exceed start_s")
        self.speed_mps = speed_mps
        self.start_s = start_s
        self.end_s = end_s

    def displacement(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return self.speed_mps * np.clip(t - self.start_s, 0.0, self.end_s - self.start_s)

    def peak_speed(self) -> float:
        return abs(self.speed_mps)


class RandomWalkTrajectory:
    """Radial track of a person wandering around the room.

    The wander is a 2-D stop-and-go stroll (random headings and stride
    lengths, step-rate speed modulation, pauses) confined to an annulus
    around the array; only the range variation is kept. Because headings
    turn freely, the radial velocity crosses zero irregularly instead of
    pacing back and forth, which keeps the track aperiodic. Realized once on
    a fixed grid from the seed, then linearly interpolated.
    """

    GRID_HZ = 200.0

    def __init__(self, duration_s: float, rms_speed_mps: float, seed: int,
                 smoothing_s: float = 0.15):
        if not 0 < rms_speed_mps <= MAX_RADIAL_SPEED_MPS:
            raise ConfigError("rms_speed_mps must be in (0, 1.5]")
        self.duration_s = duration_s
        self.rms_speed_mps = rms_speed_mps
        self.seed = seed
        self.smoothing_s = smoothing_s
        rng = np.random.default_rng(seed)
        n = int(round(duration_s * self.GRID_HZ)) + 1
        grid_t = np.arange(n) / self.GRID_HZ
        dt = 1.0 / self.GRID_HZ

        speed = np.zeros(n)
        heading = np.zeros(n)
        t = float(rng.uniform(0.0, 0.8))
        while t < duration_s:
            if rng.random() < 0.25:
                # fidgeting in place (shifting weight, reaching, sweeping arm)
                stride_s = float(rng.uniform(1.0, 3.0))
                spd = float(rng.uniform(0.16, 0.6)) * rms_speed_mps
            else:
                stride_s = float(rng.uniform(0.8, 5.0))
                spd = float(rng.uniform(0.4, 1.4)) * rms_speed_mps
            step_hz = float(rng.uniform(1.5, 2.5))
            phase = float(rng.uniform(0.0, 2 * np.pi))
            head = float(rng.uniform(0.0, 2 * np.pi))
            turn = float(rng.uniform(-0.6, 0.6))  # rad/s while striding
            seg = (grid_t >= t) & (grid_t < t + stride_s)
            speed[seg] = spd * (1.0 + 0.35 * np.sin(
                2 * np.pi * step_hz * (grid_t[seg] - t) + phase))
            heading[seg] = head + turn * (grid_t[seg] - t)
            t += stride_s + float(rng.uniform(0.3, 3.0))

        # integrate in the plane, reflecting the heading off an annulus wall
        pos = np.array([2.8, 0.0])
        xy = np.empty((n, 2))
        xy[0] = pos
        for i in range(1, n):
            if speed[i] > 0:
                step = speed[i] * dt * np.array([np.cos(heading[i]), np.sin(heading[i])])
                new = pos + step
                r = float(np.hypot(*new))
                if r < 1.6 or r > 4.5:
                    inward = -new / r if r > 4.5 else new / r
                    heading[i:] += np.pi / 2 + float(rng.uniform(0.0, np.pi / 2))
                    new = pos + speed[i] * dt * inward
                pos = new
            xy[i] = pos
        rho = np.hypot(xy[:, 0], xy[:, 1])
        k = max(1, int(round(smoothing_s * self.GRID_HZ)))
        rho = np.convolve(np.pad(rho, (k, k), mode="edge"), np.ones(k) / k, mode="same")[k:-k]
        radial_v = np.abs(np.diff(rho)) / dt
        self._grid_t = grid_t
        self._grid_d = rho[0] - rho  # displacement toward the array
        self._peak = float(radial_v.max()) if radial_v.size else 0.0

    def displacement(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return np.interp(t, self._grid_t, self._grid_d)

    def peak_speed(self) -> float:
        return self._peak


class DailyActivityTrajectory:
    """Timeline of ordinary non-fitness behavior around the device.

    Random alternation of sitting still, walking somewhere, sweeping strokes
    and small fidgeting. Individual segments may repeat briefly (sweeping is
    rhythmic, gait is rhythmic) but nothing repeats on the double-digit-second
    horizon the exercise detector keys on.
    """

    GRID_HZ = 200.0

    def __init__(self, duration_s: float, seed: int):
        self.duration_s = duration_s
        self.seed = seed
        rng = np.random.default_rng(seed)
        n = int(round(duration_s * self.GRID_HZ)) + 1
        grid_t = np.arange(n) / self.GRID_HZ
        dt = 1.0 / self.GRID_HZ
        v = np.zeros(n)

        t = 0.0
        excursion = 0.0
        # mostly sitting still, with short bursts of housework in between
        kinds = ["quiet", "quiet", "quiet", "quiet", "walk", "walk", "sweep", "fidget"]
        while t < duration_s:
            kind = kinds[int(rng.integers(0, len(kinds)))]
            if kind == "quiet":
                seg_s = float(rng.uniform(3.0, 9.0))
            elif kind == "walk":
                seg_s = float(rng.uniform(1.5, 4.5))
                speed = float(rng.uniform(0.3, 0.9))
                heading = float(rng.uniform(0.0, np.pi))  # radial share in [-1, 1]
                radial = np.cos(heading)
                if abs(excursion) > 1.2:
                    radial = -np.sign(excursion) * abs(radial)
                disp = radial * speed * seg_s
                if abs(excursion + disp) > 1.3 and abs(disp) > 1e-9:
                    # veer tangentially rather than leaving the room
                    radial *= (np.clip(excursion + disp, -1.3, 1.3) - excursion) / disp
                step_hz = float(rng.uniform(1.5, 2.5))
                phase = float(rng.uniform(0.0, 2 * np.pi))
                seg = (grid_t >= t) & (grid_t < t + seg_s)
                v[seg] = radial * speed * (1.0 + 0.35 * np.sin(
                    2 * np.pi * step_hz * (grid_t[seg] - t) + phase))
                excursion += radial * speed * seg_s
            elif kind == "sweep":
                seg_s = float(rng.uniform(1.5, 4.0))
                amp = float(rng.uniform(0.08, 0.2))
                f = float(rng.uniform(0.8, 1.4))
                phase = float(rng.uniform(0.0, 2 * np.pi))
                seg = (grid_t >= t) & (grid_t < t + seg_s)
                v[seg] = 2 * np.pi * f * amp * np.cos(2 * np.pi * f * (grid_t[seg] - t) + phase)
            else:  # fidget
                seg_s = float(rng.uniform(1.5, 4.0))
                seg = (grid_t >= t) & (grid_t < t + seg_s)
                m = int(seg.sum())
                if m:
                    w = rng.standard_normal(m)
                    k = max(1, min(int(0.25 * self.GRID_HZ), m))
                    w = np.convolve(w, np.ones(k) / k, mode="same")[:m]
                    std = float(np.std(w))
                    v[seg] = w * (0.12 / std if std > 0 else 0.0)
            t += seg_s + float(rng.uniform(0.2, 1.0))

        k = max(1, int(round(0.1 * self.GRID_HZ)))
        v = np.convolve(np.pad(v, (k, k), mode="edge"), np.ones(k) / k, mode="same")[k:-k]
        v = np.clip(v, -MAX_RADIAL_SPEED_MPS, MAX_RADIAL_SPEED_MPS)
        self._grid_t = grid_t
        self._grid_d = np.cumsum(v) * dt
        self._grid_d -= self._grid_d[0]
        self._peak = float(np.max(np.abs(v)))

    def displacement(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return np.interp(t, self._grid_t, self._grid_d)

    def peak_speed(self) -> float:
        return self._peak


@dataclass(frozen=True)
class ActionKinematics:
    """Canonical stroke parameters of one exercise type."""

    name: str
    amplitude_m: float
    period_s: float      # full repetition: extension + hold + retraction
    hold_s: float        # pause at full stroke (mid-repetition energy dip)
    rest_s: float        # nominal rest between repetitions in a set
    ext_frac: float = 0.5  # extension share of the moving time
    c1: float = 0.0
    c2: float = 0.0


@dataclass(frozen=True)
class UserProfile:
    """Per-user micro-variation: consistent warps plus random sloppiness.

    ``timing_jitter_s`` is the half-width of the uniform jitter added to each
    rest interval; bounded jitter keeps interval statistics platykurtic the
    way tired humans (rather than Gaussian noise) are.
    """

    name: str
    amp_scale: float = 1.0
    tempo_scale: float = 1.0
    hold_scale: float = 1.0
    ext_frac_shift: float = 0.0
    c1_shift: float = 0.0
    c2_shift: float = 0.0
    timing_jitter_s: float = 0.05
    tempo_jitter: float = 0.02
    shape_jitter: float = 0.02


CANONICAL_USER = UserProfile(name="canonical", timing_jitter_s=0.0,
                             tempo_jitter=0.0, shape_jitter=0.0)


def realize_schedule(
    action: ActionKinematics,
    user: UserProfile,
    n_reps: int,
    n_sets: int = 1,
    lead_in_s: float = 2.5,
    set_rest_s: float = 9.0,
    rng: np.random.Generator | None = None,
) -> RepetitionTrajectory:
    """Sample a concrete repetition schedule for (action, user).

    All randomness comes from ``rng``; passing none realizes the nominal
    (jitter-free) schedule regardless of the profile's jitter settings.
    """
    if n_reps < 1 or n_sets < 1:
        raise ConfigError("need at least one repetition and one set")
    c1 = float(np.clip(action.c1 + user.c1_shift, -0.45, 0.45))
    c2 = float(np.clip(action.c2 + user.c2_shift, -0.45, 0.45))
    if abs(c1) + abs(c2) >= 0.95:
        scale = 0.9 / (abs(c1) + abs(c2))
        c1, c2 = c1 * scale, c2 * scale
    ext_frac = float(np.clip(action.ext_frac + user.ext_frac_shift, 0.25, 0.75))

    reps: list[RepetitionPhase] = []
    t = lead_in_s
    for s in range(n_sets):
        for _ in range(n_reps):
            tempo = user.tempo_scale
            rc1, rc2 = c1, c2
            if rng is not None and user.tempo_jitter > 0:
                tempo *= 1.0 + user.tempo_jitter * rng.standard_normal()
            if rng is not None and user.shape_jitter > 0:
                rc1 = float(np.clip(c1 + user.shape_jitter * rng.standard_normal(), -0.45, 0.45))
                rc2 = float(np.clip(c2 + user.shape_jitter * rng.standard_normal(), -0.45, 0.45))
            period = max(0.6, action.period_s * tempo)
            hold = min(action.hold_s * user.hold_scale, 0.6 * period)
            moving = period - hold
            rep = RepetitionPhase(
                start_s=t,
                ext_s=moving * ext_frac,
                hold_s=hold,
                ret_s=moving * (1.0 - ext_frac),
                amplitude_m=action.amplitude_m * user.amp_scale,
                c1=rc1,
                c2=rc2,
                set_index=s,
            )
            reps.append(rep)
            rest = action.rest_s
            if rng is not None and user.timing_jitter_s > 0:
                rest += float(rng.uniform(-user.timing_jitter_s, user.timing_jitter_s))
            t = rep.end_s + max(0.3, rest)
        if s + 1 < n_sets:
            t = reps[-1].end_s + set_rest_s
    traj = RepetitionTrajectory(reps)
    if traj.peak_speed() > MAX_RADIAL_SPEED_MPS:
        raise ConfigError(
            f"schedule for {action.name}/{user.name} peaks at "
            f"{traj.peak_speed():.2f} m/s (> {MAX_RADIAL_SPEED_MPS})"
        )
    return traj


# Ten exercise types spread across stroke size, tempo, hold and timing shape.
# Repetition cycles (period + rest) stay under ~4 s so a 13 s analysis window
# always sees several of them.
ACTION_CATALOG: dict[str, ActionKinematics] = {
    a.name: a
    for a in [
        ActionKinematics("lateral_raise",  0.22, 2.2, 0.25, 1.2, ext_frac=0.54),
        ActionKinematics("curl",           0.16, 1.6, 0.12, 1.0, ext_frac=0.45, c1=0.20),
        ActionKinematics("shoulder_press", 0.34, 2.4, 0.20, 1.2, ext_frac=0.56, c1=-0.15),
        ActionKinematics("deadlift",       0.45, 2.9, 0.30, 1.1, ext_frac=0.40, c2=0.15),
        ActionKinematics("situp",          0.30, 2.0, 0.10, 1.0, ext_frac=0.40, c1=0.30),
        ActionKinematics("squat",          0.40, 2.6, 0.22, 1.2, ext_frac=0.60, c1=-0.25),
        ActionKinematics("leg_deadlift",   0.28, 3.0, 0.35, 1.0, ext_frac=0.40, c2=-0.20),
        ActionKinematics("lunge",          0.36, 2.4, 0.15, 1.1, ext_frac=0.44, c2=0.30),
        ActionKinematics("front_kick",     0.24, 1.3, 0.06, 0.9, ext_frac=0.46, c1=0.10),
        ActionKinematics("y_stretch",      0.50, 3.0, 0.40, 1.0, ext_frac=0.62, c1=0.15, c2=0.15),
    ]
}

# Six synthetic regulars, from steady "master" hands to a sloppy novice.
USER_ROSTER: dict[str, UserProfile] = {
    u.name: u
    for u in [
        UserProfile("u1", amp_scale=1.00, tempo_scale=1.00, hold_scale=1.00,
                    ext_frac_shift=0.00, c1_shift=0.00, c2_shift=0.00,
                    timing_jitter_s=0.03, tempo_jitter=0.015, shape_jitter=0.015),
        UserProfile("u2", amp_scale=1.18, tempo_scale=0.88, hold_scale=0.70,
                    ext_frac_shift=0.08, c1_shift=0.22, c2_shift=-0.10,
                    timing_jitter_s=0.06, tempo_jitter=0.02, shape_jitter=0.02),
        UserProfile("u3", amp_scale=0.84, tempo_scale=1.10, hold_scale=1.35,
                    ext_frac_shift=-0.08, c1_shift=-0.22, c2_shift=0.12,
                    timing_jitter_s=0.08, tempo_jitter=0.02, shape_jitter=0.02),
        UserProfile("u4", amp_scale=1.10, tempo_scale=1.10, hold_scale=0.85,
                    ext_frac_shift=0.10, c1_shift=-0.12, c2_shift=-0.20,
                    timing_jitter_s=0.10, tempo_jitter=0.025, shape_jitter=0.025),
        UserProfile("u5", amp_scale=0.90, tempo_scale=0.92, hold_scale=1.20,
                    ext_frac_shift=-0.10, c1_shift=0.12, c2_shift=0.22,
                    timing_jitter_s=0.25, tempo_jitter=0.04, shape_jitter=0.04),
        UserProfile("u6", amp_scale=1.06, tempo_scale=1.06, hold_scale=1.10,
                    ext_frac_shift=0.04, c1_shift=-0.05, c2_shift=0.08,
                    timing_jitter_s=0.45, tempo_jitter=0.05, shape_jitter=0.05),
    ]
}


def jitter_variant(user: UserProfile, timing_jitter_s: float) -> UserProfile:
    """Same signature, different steadiness (for effect-evaluation studies)."""
    return replace(user, timing_jitter_s=timing_jitter_s)
