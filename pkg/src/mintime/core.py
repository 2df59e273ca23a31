"""Task formulations and episode accounting for goal-reaching environments.

A goal-reaching task can be specified in three ways, differing only in the
reward function and the termination rule:

* guiding   -- dense reward: +1 inside the target, else the negative
               Euclidean distance to it; fixed-length episodes.
* contact   -- sparse reward: +1 inside the target, 0 elsewhere;
               fixed-length episodes.
* mintime   -- constant -1 reward; the episode ends only when the goal is
               reached with near-zero velocity.  A tunable timeout resamples
               the start state (keeping the goal) and charges an optional
               reset penalty, but does not end the logical episode.

This module defines the environment interface the formulations wrap, the
three wrapper classes, and the return/length accounting for minimum-time
episodes that span several timeout segments.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

GUIDING = "guiding"
CONTACT = "contact"
MINTIME = "mintime"
FORMULATIONS = (GUIDING, CONTACT, MINTIME)

DEFAULT_EPISODE_LENGTH = 1000


class StepOutcome(NamedTuple):
    """Result of one formulation-wrapped environment step.

    ``terminated`` means the goal was reached (minimum-time only);
    ``truncated`` means a time limit fired.  Never both in one step.
    """

    next_obs: np.ndarray
    reward: float
    terminated: bool
    truncated: bool


@dataclass(frozen=True)
class FormulationSpec:
    """Which reward/termination regime wraps an environment.

    ``episode_length_T`` applies to the fixed-length formulations (guiding,
    contact).  ``timeout`` and ``reset_penalty_K`` apply to mintime only:
    after ``timeout`` steps without reaching the goal the start state is
    resampled and ``-reset_penalty_K`` is added to the timeout step's reward.
    """

    kind: str
    episode_length_T: int = DEFAULT_EPISODE_LENGTH
    timeout: int | None = None
    reset_penalty_K: float = 0.0

    def __post_init__(self):
        if self.kind not in FORMULATIONS:
            raise ValueError(f"unknown formulation kind {self.kind!r}; expected one of {FORMULATIONS}")
        if self.kind in (GUIDING, CONTACT):
            if self.episode_length_T < 1:
                raise ValueError("episode_length_T must be a positive integer")
        else:
            if self.timeout is None or self.timeout < 1:
                raise ValueError("mintime formulation requires a positive integer timeout")
            if self.reset_penalty_K < 0:
                raise ValueError("reset_penalty_K must be non-negative")


class GoalReachEnv(ABC):
    """Interface the formulation wrappers drive.

    Implementations hold their own RNG, seeded at :meth:`reset`; a reset with
    the same seed must reproduce the start state and goal bit-exactly.
    Dynamics carry no reward or termination logic beyond the two goal
    predicates.  Each instance is single-threaded; run independent seeded
    instances for parallelism.
    """

    name: str
    observation_dim: int
    action_dim: int
    observation_layout: tuple[tuple[str, int], ...]
    v_tol: float

    @abstractmethod
    def reset(self, seed: int | None = None) -> np.ndarray:
        """Sample a fresh start state and goal; return the observation.

        With ``seed`` given, the RNG is reconstructed from it so the start
        state and goal placement are fully determined.  Without it, sampling
        continues the instance's existing stream.
        """

    @abstractmethod
    def resample_start(self) -> np.ndarray:
        """Redraw only the start configuration; the goal is untouched."""

    @abstractmethod
    def step_dynamics(self, action: np.ndarray) -> np.ndarray:
        """Advance the physics one tick and return the new observation."""

    @abstractmethod
    def observe(self) -> np.ndarray:
        """Current observation (a fresh array)."""

    @abstractmethod
    def in_goal(self) -> bool:
        """Whether the controlled point is inside the target region."""

    @abstractmethod
    def mintime_terminated(self) -> bool:
        """Whether the minimum-time termination condition holds (in goal
        with near-zero velocity)."""

    @abstractmethod
    def goal_distance(self) -> float:
        """Distance from the controlled point to the target."""


def guiding_reward(fingertip_pos, target_pos, target_radius: float) -> float:
    """Dense goal-reaching reward: +1 inside the target ball, else the
    negative Euclidean distance to the target.

    The in-target test uses the closed ball (distance <= radius), so the
    two cases are mutually exclusive and the boundary is deterministic.
    """
    if target_radius <= 0:
        raise ValueError("target_radius must be positive")
    delta = np.asarray(target_pos, dtype=float) - np.asarray(fingertip_pos, dtype=float)
    dist = float(np.linalg.norm(delta))
    if dist <= target_radius:
        return 1.0
    return -dist


def contact_reward(in_target: bool) -> float:
    """Sparse goal-reaching reward: +1 inside the target, 0 elsewhere."""
    return 1.0 if in_target else 0.0


@dataclass(frozen=True)
class EpisodeRecord:
    """Accounting for one logical minimum-time episode.

    ``segments`` lists (steps_taken, timed_out) per timeout segment.  Each
    timeout charges the reset penalty K both against the return and, by the
    same arithmetic, onto the length, so for a -1-per-step reward the
    adjusted return and adjusted length are negatives of each other.
    """

    segments: tuple[tuple[int, bool], ...]
    adjusted_return: float
    adjusted_length: int
    reached_goal: bool

    @property
    def env_steps(self) -> int:
        """Raw environment steps consumed, without reset-penalty inflation."""
        return sum(steps for steps, _ in self.segments)


def accumulate_episode(segments, timeout_T: int, reset_penalty_K: float) -> EpisodeRecord:
    """Fold timeout segments into one episode's adjusted return and length.

    Every timed-out segment must have run exactly ``timeout_T`` steps, and
    only the final segment may be a non-timeout (the successful one).  With
    the minimum-time reward of -1 per step:

        adjusted_return = -(total steps) - K * (number of timeouts)
        adjusted_length =  (total steps) + K * (number of timeouts)

    A segment list ending on a timeout is a legal mid-flight end (a run-level
    step budget expired); its record carries ``reached_goal=False``.  The
    length charge assumes an integral K, matching the interpretation of the
    reset penalty as K lost timesteps.
    """
    segments = tuple((int(s), bool(t)) for s, t in segments)
    if not segments:
        raise ValueError("episode must contain at least one segment")
    for i, (steps, timed_out) in enumerate(segments):
        if steps < 1:
            raise ValueError(f"segment {i} has non-positive step count {steps}")
        if timed_out and steps != timeout_T:
            raise ValueError(
                f"timed-out segment {i} ran {steps} steps, expected exactly timeout_T={timeout_T}"
            )
        if not timed_out and i != len(segments) - 1:
            raise ValueError(f"non-final segment {i} did not time out; only the final segment may succeed")

    total_steps = sum(s for s, _ in segments)
    n_timeouts = sum(1 for _, t in segments if t)
    penalty = reset_penalty_K * n_timeouts
    length = total_steps + penalty
    return EpisodeRecord(
        segments=segments,
        adjusted_return=-float(total_steps) - penalty,
        adjusted_length=int(length) if float(length).is_integer() else length,
        reached_goal=not segments[-1][1],
    )


def _check_action(action: np.ndarray, action_dim: int) -> np.ndarray:
    action = np.asarray(action, dtype=float).reshape(-1)
    if action.shape != (action_dim,):
        raise ValueError(f"action has shape {action.shape}, expected ({action_dim},)")
    if not np.all(np.isfinite(action)):
        raise ValueError("action contains non-finite entries")
    if np.any(np.abs(action) > 1.0):
        raise ValueError("action components must lie in [-1, 1]; clamp before stepping")
    return action


class FormulationWrapper(ABC):
    """Base class binding an environment to one task formulation."""

    def __init__(self, env: GoalReachEnv, spec: FormulationSpec):
        self.env = env
        self.spec = spec
        self._t = 0
        self._needs_reset = True

    @property
    def needs_reset(self) -> bool:
        return self._needs_reset

    def reset(self, seed: int | None = None) -> np.ndarray:
        obs = self.env.reset(seed)
        self._t = 0
        self._needs_reset = False
        return obs

    def step(self, action) -> StepOutcome:
        if self._needs_reset:
            raise RuntimeError("episode is over; call reset() before stepping again")
        action = _check_action(action, self.env.action_dim)
        return self._step(action)

    @abstractmethod
    def _step(self, action: np.ndarray) -> StepOutcome: ...


class _FixedLengthWrapper(FormulationWrapper):
    """Shared plumbing for the two fixed-length formulations: episodes last
    exactly T steps and never terminate on goal contact."""

    def _step(self, action):
        obs = self.env.step_dynamics(action)
        self._t += 1
        truncated = self._t >= self.spec.episode_length_T
        if truncated:
            self._needs_reset = True
        return StepOutcome(obs, self._reward(), False, truncated)

    @abstractmethod
    def _reward(self) -> float: ...


class GuidingWrapper(_FixedLengthWrapper):
    """Dense guiding reward over fixed-length episodes."""

    def __init__(self, env, spec):
        if spec.kind != GUIDING:
            raise ValueError(f"spec kind {spec.kind!r} does not match wrapper")
        super().__init__(env, spec)

    def _reward(self):
        if self.env.in_goal():
            return 1.0
        return -self.env.goal_distance()


class ContactWrapper(_FixedLengthWrapper):
    """Sparse contact reward over fixed-length episodes."""

    def __init__(self, env, spec):
        if spec.kind != CONTACT:
            raise ValueError(f"spec kind {spec.kind!r} does not match wrapper")
        super().__init__(env, spec)

    def _reward(self):
        return contact_reward(self.env.in_goal())


class MinTimeWrapper(FormulationWrapper):
    """Constant -1 reward until the goal is reached with near-zero velocity.

    Exceeding the timeout resamples the start state (the goal is preserved),
    marks the step truncated, and charges ``-reset_penalty_K`` on top of the
    step reward.  The logical episode continues across timeouts; only goal
    termination ends it.  Completed timeout segments are tracked so the
    episode's adjusted return and length can be assembled afterwards.
    """

    def __init__(self, env, spec):
        if spec.kind != MINTIME:
            raise ValueError(f"spec kind {spec.kind!r} does not match wrapper")
        super().__init__(env, spec)
        self._segments: list[tuple[int, bool]] = []

    def reset(self, seed: int | None = None) -> np.ndarray:
        obs = super().reset(seed)
        self._segments = []
        return obs

    @property
    def completed_segments(self) -> tuple[tuple[int, bool], ...]:
        return tuple(self._segments)

    @property
    def open_segment_steps(self) -> int:
        """Steps taken in the not-yet-closed segment (for mid-run accounting)."""
        return self._t

    def _step(self, action):
        obs = self.env.step_dynamics(action)
        self._t += 1
        if self.env.mintime_terminated():
            self._segments.append((self._t, False))
            self._needs_reset = True
            return StepOutcome(obs, -1.0, True, False)
        if self._t >= self.spec.timeout:
            self._segments.append((self.spec.timeout, True))
            self._t = 0
            fresh = self.env.resample_start()
            return StepOutcome(fresh, -1.0 - self.spec.reset_penalty_K, False, True)
        return StepOutcome(obs, -1.0, False, False)

    def episode_record(self) -> EpisodeRecord:
        """Accounting for the episode that just terminated."""
        if not self._needs_reset:
            raise RuntimeError("episode still in flight; no completed record available")
        return accumulate_episode(self._segments, self.spec.timeout, self.spec.reset_penalty_K)

    def partial_record(self) -> EpisodeRecord | None:
        """Accounting for an episode cut off mid-flight by a run-level step
        budget.  Returns None when nothing has been stepped.  The record is
        flagged ``reached_goal=False`` regardless of segment shape."""
        segments = list(self._segments)
        if self._t > 0:
            segments.append((self._t, False))
        if not segments:
            return None
        total_steps = sum(s for s, _ in segments)
        n_timeouts = sum(1 for _, t in segments if t)
        penalty = self.spec.reset_penalty_K * n_timeouts
        length = total_steps + penalty
        return EpisodeRecord(
            segments=tuple(segments),
            adjusted_return=-float(total_steps) - penalty,
            adjusted_length=int(length) if float(length).is_integer() else length,
            reached_goal=False,
        )


def wrap(env: GoalReachEnv, spec: FormulationSpec) -> FormulationWrapper:
    """Wrap an environment in the formulation named by ``spec.kind``."""
    cls = {GUIDING: GuidingWrapper, CONTACT: ContactWrapper, MINTIME: MinTimeWrapper}[spec.kind]
    return cls(env, spec)
