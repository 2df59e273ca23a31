"""The training loop binding environment, formulation, agent, and logging.

Writes, under the output directory: ``learning_curve.csv`` (one row per
completed episode, step-indexed), ``config.txt`` (the echo file that
reproduces the run), ``checkpoint_<step>.npz`` every 10K steps plus a final
one, and ``run_summary.json``.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .agent import SacAgent
from .config import RunConfig, component_seeds
from .core import MINTIME, EpisodeRecord, MinTimeWrapper, wrap
from .envs import make_env
from .evaluation import mintime_success_rate, write_learning_curve

CHECKPOINT_EVERY = 10_000


def checkpoint_steps(total_steps: int, every: int = CHECKPOINT_EVERY) -> list[int]:
    """Steps at which checkpoints are written: every cadence multiple, plus
    the final step when it is not already one."""
    steps = list(range(every, total_steps + 1, every))
    if not steps or steps[-1] != total_steps:
        steps.append(total_steps)
    return steps


@dataclass
class TrainResult:
    config: RunConfig
    records: list[EpisodeRecord]
    partial_record: EpisodeRecord | None
    update_calls: int
    env_steps: int
    checkpoints: list[Path]
    agent: SacAgent
    eval_history: list[tuple[int, float]] = field(default_factory=list)
    stopped_early: bool = False

    @property
    def hits(self) -> int:
        return sum(1 for r in self.records if r.reached_goal)


def run_training(
    config: RunConfig,
    out_dir=None,
    eval_every: int | None = None,
    eval_episodes: int = 100,
    eval_horizon: int | None = None,
    success_threshold: float | None = None,
    quiet: bool = True,
) -> TrainResult:
    """Run seeded training for ``config.steps`` environment steps.

    With ``eval_every`` set, a deterministic goal-success evaluation runs on
    that cadence (horizon defaults to the training timeout) and, when
    ``success_threshold`` is also given, the run stops early once the rate
    reaches it.  Raises TrainingDiverged on non-finite losses or gradients.
    """
    seeds = component_seeds(config.seed)
    env = make_env(config.env)
    spec = config.formulation_spec()
    wrapper = wrap(env, spec)
    agent_cfg = config.agent_config()
    agent = SacAgent(env.observation_dim, env.action_dim, agent_cfg, seed=seeds["agent"])
    buffer = agent.make_buffer()

    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        out_path.mkdir(parents=True, exist_ok=True)
        config.to_file(out_path / "config.txt")
    run_info = {
        "env": config.env,
        "formulation": config.formulation,
        "timeout": config.timeout,
        "reset_penalty": config.reset_penalty,
        "episode_length": config.episode_length,
        "master_seed": config.seed,
    }

    mintime = spec.kind == MINTIME
    ckpt_at = set(checkpoint_steps(config.steps))
    records: list[EpisodeRecord] = []
    checkpoints: list[Path] = []
    eval_history: list[tuple[int, float]] = []
    fixed_return = 0.0
    fixed_steps = 0
    update_calls = 0
    stopped_early = False
    t_start = time.monotonic()

    def save_checkpoint(step):
        if out_path is None:
            return
        path = out_path / f"checkpoint_{step:08d}.npz"
        agent.save(path, step=step, seed=config.seed, run_info=run_info)
        checkpoints.append(path)

    obs = wrapper.reset(seed=seeds["env"])
    step = 0
    for step in range(1, config.steps + 1):
        if step <= agent_cfg.warmup_steps:
            action = agent.initial_action()
        else:
            action = agent.act(obs)
        out = wrapper.step(action)
        buffer.push(obs, action, out.reward, out.next_obs, 0.0 if out.terminated else 1.0)
        obs = out.next_obs

        if mintime:
            if out.terminated:
                records.append(wrapper.episode_record())
                obs = wrapper.reset()
        else:
            fixed_return += out.reward
            fixed_steps += 1
            if out.truncated:
                records.append(
                    EpisodeRecord(((fixed_steps, False),), fixed_return, fixed_steps, False)
                )
                fixed_return, fixed_steps = 0.0, 0
                obs = wrapper.reset()

        if (
            step > agent_cfg.warmup_steps
            and (step - agent_cfg.warmup_steps) % agent_cfg.update_every_k == 0
            and len(buffer) >= agent_cfg.batch_size
        ):
            agent.update(buffer)
            update_calls += 1

        if step in ckpt_at:
            save_checkpoint(step)
            if not quiet:
                recent = [r.adjusted_return for r in records[-20:]]
                mean_ret = float(np.mean(recent)) if recent else float("nan")
                print(
                    f"step {step}: episodes={len(records)} hits={sum(r.reached_goal for r in records)}"
                    f" recent_return={mean_ret:.1f} alpha={agent.alpha:.4f}"
                )

        if eval_every is not None and step % eval_every == 0 and step > agent_cfg.warmup_steps:
            horizon = eval_horizon if eval_horizon is not None else config.timeout
            rate = mintime_success_rate(agent, config.env, eval_episodes, horizon, seed=seeds["eval"])
            eval_history.append((step, rate))
            if not quiet:
                print(f"step {step}: deterministic goal-success rate {rate:.2f}")
            if success_threshold is not None and rate >= success_threshold:
                stopped_early = True
                if step not in ckpt_at:
                    save_checkpoint(step)
                break

    partial = None
    if mintime:
        partial = wrapper.partial_record()
    elif fixed_steps > 0:
        partial = EpisodeRecord(((fixed_steps, False),), fixed_return, fixed_steps, False)

    if out_path is not None:
        write_learning_curve(records, out_path / "learning_curve.csv")
        summary = {
            "env_steps": step,
            "update_calls": update_calls,
            "episodes": len(records),
            "hits": sum(1 for r in records if r.reached_goal),
            "stopped_early": stopped_early,
            "eval_history": eval_history,
            "partial_episode": None
            if partial is None
            else {"return": partial.adjusted_return, "length": partial.adjusted_length},
            "wall_seconds": round(time.monotonic() - t_start, 3),
        }
        with open(out_path / "run_summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)

    return TrainResult(
        config=config,
        records=records,
        partial_record=partial,
        update_calls=update_calls,
        env_steps=step,
        checkpoints=checkpoints,
        agent=agent,
        eval_history=eval_history,
        stopped_early=stopped_early,
    )
