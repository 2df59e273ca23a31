"""Policy evaluation: final-behavior metrics, cross-formulation returns, and
learning-curve files.

Two protocols coexist:

* metric runs -- fixed-horizon episodes with NO goal termination, so both
  "steps to goal" (first in-goal step, censored at the horizon) and "steps
  on goal" (total in-goal steps) are measurable in one pass.
* formulation runs -- episodes under a target formulation's own reward and
  termination rules, reporting its undiscounted return (minimum-time returns
  use the timeout-segment accounting, capped at a whole-segment budget for
  policies that never reach the goal).

Evaluation acts deterministically (mean action) and never touches the
learner's buffer or parameters.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agent import SacAgent
from .core import (
    CONTACT,
    GUIDING,
    MINTIME,
    EpisodeRecord,
    FormulationSpec,
    accumulate_episode,
    wrap,
)
from .envs import make_env

EVAL_CSV_COLUMNS = (
    "run_id",
    "env",
    "formulation_trained",
    "formulation_evaluated",
    "episode",
    "steps_to_goal",
    "steps_on_goal",
    "return",
)

LEARNING_CURVE_COLUMNS = ("env_step_at_episode_end", "adjusted_return", "adjusted_length", "hits_so_far")


class InitialGaussianPolicy:
    """The untrained policy: tanh of standard normal draws, ignoring the
    observation.  Serves as the random baseline in cross-formulation
    comparisons and mirrors the probe's action distribution."""

    def __init__(self, act_dim: int, seed: int = 0):
        self.act_dim = act_dim
        self._rng = np.random.default_rng(seed)

    def act(self, obs, deterministic: bool = False):
        obs = np.asarray(obs)
        if obs.ndim == 1:
            return np.tanh(self._rng.standard_normal(self.act_dim))
        return np.tanh(self._rng.standard_normal((obs.shape[0], self.act_dim)))


def _seed_list(seed: int, n: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def _env_factory(env):
    """A zero-argument factory from a registered name or a callable."""
    if isinstance(env, str):
        return lambda: make_env(env)
    return env


def _make_envs(env, episodes: int, seed: int):
    factory = _env_factory(env)
    envs = []
    for s in _seed_list(seed, episodes):
        e = factory()
        e.reset(seed=s)
        envs.append(e)
    return envs


def _stderr(values) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


@dataclass
class EvalStats:
    """Per-episode metric arrays from a fixed-horizon run."""

    steps_to_goal: np.ndarray
    steps_on_goal: np.ndarray
    horizon: int
    guiding_returns: np.ndarray

    @property
    def episodes(self) -> int:
        return int(self.steps_to_goal.size)

    @property
    def reached_fraction(self) -> float:
        return float(np.mean(self.steps_to_goal < self.horizon))

    @property
    def mean_steps_to_goal(self) -> float:
        return float(np.mean(self.steps_to_goal))

    @property
    def stderr_steps_to_goal(self) -> float:
        return _stderr(self.steps_to_goal)

    @property
    def mean_steps_on_goal(self) -> float:
        return float(np.mean(self.steps_on_goal))

    @property
    def stderr_steps_on_goal(self) -> float:
        return _stderr(self.steps_on_goal)


def evaluate_policy(policy, env, episodes: int = 500, horizon: int = 5000, seed: int = 0) -> EvalStats:
    """Fixed-horizon metric evaluation with deterministic (mean) actions.

    ``env`` is a registered name or a zero-argument factory.  All episodes
    advance in lockstep (no termination, identical length), so the policy
    runs batched.  States are inspected at t = 0..horizon-1; an episode
    spawned inside the goal therefore scores steps_to_goal = 0, and one that
    never reaches it scores the censoring value ``horizon``.  The guiding
    return accumulated over the horizon rides along as a dense quality
    score.
    """
    envs = _make_envs(env, episodes, seed)
    first_hit = np.full(episodes, horizon, dtype=int)
    on_goal = np.zeros(episodes, dtype=int)
    guiding_returns = np.zeros(episodes)
    obs = np.stack([e.observe() for e in envs])
    for t in range(horizon):
        for i, e in enumerate(envs):
            if e.in_goal():
                on_goal[i] += 1
                if first_hit[i] == horizon:
                    first_hit[i] = t
                if t > 0:
                    guiding_returns[i] += 1.0
            elif t > 0:
                guiding_returns[i] -= e.goal_distance()
        if t == horizon - 1:
            break
        actions = np.clip(policy.act(obs, deterministic=True), -1.0, 1.0)
        obs = np.stack([e.step_dynamics(actions[i]) for i, e in enumerate(envs)])
    return EvalStats(first_hit, on_goal, horizon, guiding_returns)


@dataclass(frozen=True)
class EvalRow:
    run_id: str
    env: str
    formulation_trained: str
    formulation_evaluated: str
    episode: int
    steps_to_goal: int
    steps_on_goal: int
    ret: float


@dataclass
class CrossEvalResult:
    formulation: str
    returns: np.ndarray
    reached: np.ndarray
    rows: list

    @property
    def mean_return(self) -> float:
        return float(np.mean(self.returns))

    @property
    def stderr_return(self) -> float:
        return _stderr(self.returns)

    @property
    def reached_fraction(self) -> float:
        return float(np.mean(self.reached))


def load_policy(source):
    """Resolve a checkpoint path or in-memory policy to (policy, info)."""
    if isinstance(source, (str, Path)):
        agent, meta = SacAgent.load(source)
        return agent, meta.get("run_info", {})
    return source, {}


def cross_evaluate(
    source,
    formulation: FormulationSpec,
    episodes: int = 100,
    env=None,
    seed: int = 0,
    max_segments: int = 5,
    run_id: str = "xeval",
) -> CrossEvalResult:
    """Evaluate a policy under a target formulation's own rules.

    ``source`` is a checkpoint path (the environment then defaults to the
    one recorded at training time) or a policy object with
    ``act(obs, deterministic)``; ``env`` overrides with a registered name or
    factory.  Guiding/contact episodes run their fixed length; minimum-time
    episodes run until goal termination or a budget of ``max_segments``
    whole timeout segments, whichever is first, and report the
    timeout-adjusted return.  A checkpoint whose observation width does not
    match the environment is rejected.
    """
    policy, info = load_policy(source)
    env = env if env is not None else info.get("env")
    if env is None:
        raise ValueError("no environment recorded in the checkpoint; pass env")
    factory = _env_factory(env)
    probe_env = factory()
    expected = getattr(policy, "obs_dim", None)
    if expected is not None and expected != probe_env.observation_dim:
        raise ValueError(
            f"checkpoint expects {expected}-dim observations but {probe_env.name} emits "
            f"{probe_env.observation_dim}-dim ones"
        )
    env_label = probe_env.name
    trained_on = info.get("formulation", "none")
    if formulation.kind == MINTIME:
        return _cross_evaluate_mintime(
            policy, factory, env_label, formulation, episodes, seed, max_segments, run_id, trained_on
        )
    return _cross_evaluate_fixed(policy, factory, env_label, formulation, episodes, seed, run_id, trained_on)


def _cross_evaluate_fixed(policy, factory, env_label, spec, episodes, seed, run_id, trained_on):
    """Lockstep batched run of the fixed-length formulations.

    steps_to_goal counts the first in-goal state (0 = spawned inside,
    censored at T); steps_on_goal counts in-goal post-step states, which for
    the contact formulation equals its return by construction.
    """
    horizon = spec.episode_length_T
    wrappers = [wrap(factory(), spec) for _ in range(episodes)]
    for w, s in zip(wrappers, _seed_list(seed, episodes)):
        w.reset(seed=s)
    envs = [w.env for w in wrappers]
    returns = np.zeros(episodes)
    first_hit = np.full(episodes, horizon, dtype=int)
    on_goal = np.zeros(episodes, dtype=int)
    for i, e in enumerate(envs):
        if e.in_goal():
            first_hit[i] = 0
    obs = np.stack([e.observe() for e in envs])
    for t in range(1, horizon + 1):
        actions = np.clip(policy.act(obs, deterministic=True), -1.0, 1.0)
        outs = [w.step(actions[i]) for i, w in enumerate(wrappers)]
        obs = np.stack([o.next_obs for o in outs])
        for i, (e, o) in enumerate(zip(envs, outs)):
            returns[i] += o.reward
            if e.in_goal():
                on_goal[i] += 1
                if first_hit[i] == horizon:
                    first_hit[i] = t
    rows = [
        EvalRow(run_id, env_label, trained_on, spec.kind, i, int(first_hit[i]), int(on_goal[i]), float(returns[i]))
        for i in range(episodes)
    ]
    return CrossEvalResult(spec.kind, returns, first_hit < horizon, rows)


def _cross_evaluate_mintime(policy, factory, env_label, spec, episodes, seed, max_segments, run_id, trained_on):
    """Sequential minimum-time episodes with a whole-segment step budget.

    steps_to_goal reports the adjusted episode length (the budget-capped
    value when the goal was never reached); steps_on_goal is 0 by
    construction since termination ends the episode at first parked contact.
    """
    returns = np.zeros(episodes)
    reached = np.zeros(episodes, dtype=bool)
    rows = []
    for i, ep_seed in enumerate(_seed_list(seed, episodes)):
        wrapper = wrap(factory(), spec)
        obs = wrapper.reset(seed=ep_seed)
        record = None
        while record is None:
            action = np.clip(policy.act(obs, deterministic=True), -1.0, 1.0)
            out = wrapper.step(action)
            obs = out.next_obs
            if out.terminated:
                record = wrapper.episode_record()
            elif out.truncated and len(wrapper.completed_segments) >= max_segments:
                record = accumulate_episode(wrapper.completed_segments, spec.timeout, spec.reset_penalty_K)
        returns[i] = record.adjusted_return
        reached[i] = record.reached_goal
        rows.append(
            EvalRow(run_id, env_label, trained_on, MINTIME, i, int(record.adjusted_length), 0, float(record.adjusted_return))
        )
    return CrossEvalResult(MINTIME, returns, reached, rows)


def write_learning_curve(records, path) -> None:
    """Step-indexed learning-curve CSV from completed episode records.

    The step index counts raw environment steps (reset penalties inflate the
    adjusted length but consume no steps), so curves from different runs
    align.  An empty record list yields a header-only file.
    """
    env_step = 0
    hits = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LEARNING_CURVE_COLUMNS)
        for rec in records:
            env_step += rec.env_steps
            hits += int(rec.reached_goal)
            writer.writerow([env_step, repr(float(rec.adjusted_return)), rec.adjusted_length, hits])


def write_eval_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EVAL_CSV_COLUMNS)
        for r in rows:
            writer.writerow(
                [
                    r.run_id,
                    r.env,
                    r.formulation_trained,
                    r.formulation_evaluated,
                    r.episode,
                    r.steps_to_goal,
                    r.steps_on_goal,
                    repr(float(r.ret)),
                ]
            )


def mintime_success_rate(policy, env, episodes: int, horizon: int, seed: int = 0) -> float:
    """Fraction of fresh-start episodes in which the deterministic policy
    triggers minimum-time termination within ``horizon`` steps (one segment,
    no timeout resets)."""
    factory = _env_factory(env)
    successes = 0
    for ep_seed in _seed_list(seed, episodes):
        env_i = factory()
        obs = env_i.reset(seed=ep_seed)
        for _ in range(horizon):
            action = np.clip(policy.act(obs, deterministic=True), -1.0, 1.0)
            obs = env_i.step_dynamics(action)
            if env_i.mintime_terminated():
                successes += 1
                break
    return successes / episodes
