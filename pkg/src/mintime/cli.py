"""Command-line entry point: train, probe, sweep, eval, xeval.

Every command writes its artifacts under ``--out`` and refuses to clobber
an existing run unless ``--force`` is given.  ``--config`` loads a flat
key=value file; explicit flags override it, and it overrides the defaults.
"""

import argparse
import sys
from pathlib import Path

from .config import RunConfig, load_config, parse_config_file
from .core import CONTACT, FORMULATIONS, GUIDING, MINTIME, FormulationSpec
from .envs import ENV_NAMES, make_env
from .evaluation import EvalRow, cross_evaluate, evaluate_policy, load_policy, write_eval_csv
from .probe import (
    DEFAULT_HIT_THRESHOLD,
    DEFAULT_PROBE_STEPS,
    learnability_verdict,
    run_probe,
    summarize_sweep,
    sweep_timeouts,
    write_probe_csv,
)
from .training import run_training

_CONFIG_FLAGS = (
    # (flag, config key, type, help)
    ("--env", "env", str, "environment name (%s)" % ", ".join(ENV_NAMES)),
    ("--formulation", "formulation", str, "task formulation: guiding, contact, or mintime"),
    ("--timeout", "timeout", int, "mintime time limit in steps"),
    ("--reset-penalty", "reset_penalty", float, "mintime reset penalty K charged per timeout"),
    ("--episode-length", "episode_length", int, "fixed episode length for guiding/contact"),
    ("--steps", "steps", int, "total environment steps to train for"),
    ("--seed", "seed", int, "master seed; component seeds derive from it"),
    ("--buffer-capacity", "buffer_capacity", int, "replay buffer capacity"),
    ("--actor-lr", "actor_lr", float, "actor step size"),
    ("--critic-lr", "critic_lr", float, "critic step size"),
    ("--temp-lr", "temp_lr", float, "entropy temperature step size"),
    ("--batch", "batch_size", int, "mini-batch size"),
    ("--gamma", "gamma", float, "discount factor"),
    ("--update-every-k", "update_every_k", int, "environment steps between update calls"),
    ("--epochs-per-update", "epochs_per_update", int, "gradient steps per update call"),
    ("--warmup-steps", "warmup_steps", int, "initial-policy steps before learning starts"),
    ("--adam-betas", "adam_betas", str, "Adam betas, e.g. 0.9,0.999"),
    ("--init-temperature", "init_temperature", float, "initial entropy temperature"),
    ("--hidden-sizes", "hidden_sizes", str, "MLP hidden sizes, e.g. 512,512"),
    ("--tau", "target_smoothing_tau", float, "soft target update rate"),
    ("--target-entropy", "target_entropy", str, "target entropy, or 'auto' for -action_dim"),
    ("--dtype", "dtype", str, "network precision: float64 (default) or float32"),
)


def _build_run_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for flag, key, _, _ in _CONFIG_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            if isinstance(value, str) and key in ("adam_betas", "hidden_sizes", "target_entropy"):
                from .config import _FIELD_CODECS

                value = _FIELD_CODECS[key][0](value)
            overrides[key] = value
    return config.with_overrides(**overrides)


def _prepare_out(args, *artifact_names) -> Path:
    out = Path(args.out)
    existing = [name for name in artifact_names if (out / name).exists()]
    if existing and not args.force:
        raise RuntimeError(
            f"output directory {out} already contains {', '.join(existing)}; rerun with --force to overwrite"
        )
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_train(args) -> int:
    config = _build_run_config(args)
    out = _prepare_out(args, "config.txt", "learning_curve.csv")
    result = run_training(config, out_dir=out, quiet=False)
    print(
        f"train done: env={config.env} formulation={config.formulation} steps={result.env_steps}"
        f" episodes={len(result.records)} hits={result.hits} updates={result.update_calls}"
        f" checkpoints={len(result.checkpoints)} out={out}"
    )
    return 0


def cmd_probe(args) -> int:
    out = _prepare_out(args, "probe.csv")
    report = run_probe(args.env, args.timeout, total_steps=args.steps, seed=args.seed)
    write_probe_csv([report], out / "probe.csv")
    verdict = "LEARNABLE" if learnability_verdict(report, args.threshold) else "not-learnable"
    print(
        f"probe env={report.env} timeout={report.timeout} seed={report.seed}"
        f" hits={report.hits} hits_per_20k={report.hits_per_20k:.3f} verdict={verdict}"
    )
    return 0


def cmd_sweep(args) -> int:
    out = _prepare_out(args, "probe.csv")
    timeouts = [int(t) for t in args.timeouts.split(",") if t.strip()]
    reports = sweep_timeouts(
        args.env, timeouts, repeats=args.repeats, total_steps=args.steps, master_seed=args.seed
    )
    write_probe_csv(reports, out / "probe.csv")
    print(f"sweep env={args.env} steps_per_probe={args.steps} repeats={args.repeats}")
    print(f"{'timeout':>8} {'mean_hits':>10} {'per_20k':>8}  verdict")
    for timeout, mean_hits in summarize_sweep(reports).items():
        per_20k = mean_hits * 20_000.0 / args.steps
        verdict = "LEARNABLE" if per_20k >= args.threshold else "not-learnable"
        print(f"{timeout:>8} {mean_hits:>10.1f} {per_20k:>8.1f}  {verdict}")
    return 0


def cmd_eval(args) -> int:
    out = _prepare_out(args, "eval.csv")
    ckpt = Path(args.ckpt)
    if not ckpt.exists():
        raise FileNotFoundError(f"checkpoint {ckpt} does not exist")
    policy, info = load_policy(ckpt)
    env_name = args.env or info.get("env")
    if env_name is None:
        raise ValueError("checkpoint records no environment; pass --env")
    if policy.obs_dim != make_env(env_name).observation_dim:
        raise ValueError(f"checkpoint is {policy.obs_dim}-dim but {env_name} is not")
    run_id = args.run_id or ckpt.stem
    stats = evaluate_policy(policy, env_name, episodes=args.episodes, horizon=args.horizon, seed=args.seed)
    rows = [
        EvalRow(
            run_id,
            env_name,
            info.get("formulation", "none"),
            "none",
            i,
            int(stats.steps_to_goal[i]),
            int(stats.steps_on_goal[i]),
            float(stats.guiding_returns[i]),
        )
        for i in range(stats.episodes)
    ]
    write_eval_csv(rows, out / "eval.csv")
    print(
        f"eval env={env_name} episodes={stats.episodes} horizon={stats.horizon}"
        f" steps_to_goal={stats.mean_steps_to_goal:.1f}+-{stats.stderr_steps_to_goal:.1f}"
        f" steps_on_goal={stats.mean_steps_on_goal:.1f}+-{stats.stderr_steps_on_goal:.1f}"
        f" reached={stats.reached_fraction:.2f}"
    )
    return 0


def cmd_xeval(args) -> int:
    out = _prepare_out(args, "eval.csv")
    ckpt = Path(args.ckpt)
    if not ckpt.exists():
        raise FileNotFoundError(f"checkpoint {ckpt} does not exist")
    kinds = list(FORMULATIONS) if args.formulation == "all" else [args.formulation]
    run_id = args.run_id or ckpt.stem
    rows = []
    for kind in kinds:
        spec = FormulationSpec(
            kind,
            episode_length_T=args.episode_length,
            timeout=args.timeout,
            reset_penalty_K=args.reset_penalty,
        )
        result = cross_evaluate(
            ckpt,
            spec,
            episodes=args.episodes,
            env=args.env,
            seed=args.seed,
            max_segments=args.max_segments,
            run_id=run_id,
        )
        rows.extend(result.rows)
        print(
            f"xeval formulation={kind} episodes={args.episodes}"
            f" mean_return={result.mean_return:.2f}+-{result.stderr_return:.2f}"
            f" reached={result.reached_fraction:.2f}"
        )
    write_eval_csv(rows, out / "eval.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mintime",
        description="Goal-reaching RL workbench: three task formulations, timeout probing, SAC training.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train SAC under a chosen formulation")
    train.add_argument("--config", help="flat key=value config file; flags override it")
    for flag, key, typ, help_text in _CONFIG_FLAGS:
        train.add_argument(flag, dest=key, type=typ if typ is not str else str, default=None, help=help_text)
    train.add_argument("--out", required=True, help="output directory for run artifacts")
    train.add_argument("--force", action="store_true", help="overwrite existing artifacts")
    train.set_defaults(func=cmd_train)

    probe = sub.add_parser("probe", help="count initial-policy target hits at one timeout")
    probe.add_argument("--env", required=True, choices=ENV_NAMES)
    probe.add_argument("--timeout", required=True, type=int)
    probe.add_argument("--steps", type=int, default=DEFAULT_PROBE_STEPS, help="probe step budget")
    probe.add_argument("--seed", type=int, default=0)
    probe.add_argument("--threshold", type=float, default=DEFAULT_HIT_THRESHOLD, help="verdict threshold (hits per 20K)")
    probe.add_argument("--out", required=True)
    probe.add_argument("--force", action="store_true")
    probe.set_defaults(func=cmd_probe)

    sweep = sub.add_parser("sweep", help="probe a grid of timeouts")
    sweep.add_argument("--env", required=True, choices=ENV_NAMES)
    sweep.add_argument("--timeouts", default="25,50,100,200,500,1000,2000", help="comma-separated timeouts")
    sweep.add_argument("--repeats", type=int, default=5)
    sweep.add_argument("--steps", type=int, default=DEFAULT_PROBE_STEPS)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--threshold", type=float, default=DEFAULT_HIT_THRESHOLD)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--force", action="store_true")
    sweep.set_defaults(func=cmd_sweep)

    ev = sub.add_parser("eval", help="fixed-horizon steps-to/on-goal metrics for a checkpoint")
    ev.add_argument("--ckpt", required=True)
    ev.add_argument("--env", default=None, help="override the checkpoint's recorded environment")
    ev.add_argument("--episodes", type=int, default=500)
    ev.add_argument("--horizon", type=int, default=5000)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--run-id", default=None)
    ev.add_argument("--out", required=True)
    ev.add_argument("--force", action="store_true")
    ev.set_defaults(func=cmd_eval)

    xe = sub.add_parser("xeval", help="evaluate a checkpoint under other formulations' returns")
    xe.add_argument("--ckpt", required=True)
    xe.add_argument("--formulation", default="all", choices=(*FORMULATIONS, "all"))
    xe.add_argument("--env", default=None)
    xe.add_argument("--episodes", type=int, default=100)
    xe.add_argument("--episode-length", dest="episode_length", type=int, default=1000)
    xe.add_argument("--timeout", type=int, default=100)
    xe.add_argument("--reset-penalty", dest="reset_penalty", type=float, default=0.0)
    xe.add_argument("--max-segments", dest="max_segments", type=int, default=5)
    xe.add_argument("--seed", type=int, default=0)
    xe.add_argument("--run-id", default=None)
    xe.add_argument("--out", required=True)
    xe.add_argument("--force", action="store_true")
    xe.set_defaults(func=cmd_xeval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI boundary: report and exit nonzero
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
