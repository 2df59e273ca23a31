"""Evaluate a trained policy on every formulation's own scoreboard.

Loads the newest checkpoint from the training demo and reports:

* the fixed-horizon metrics (steps to goal, steps on goal) measured with no
  goal termination, so both are observable in one pass, and
* the undiscounted return under each of the three formulations' own rules
  (minimum-time returns use the timeout-segment accounting),
* the same returns for the untrained tanh(N(0,1)) baseline, for scale.

Run demos/03_train_minimum_time.py first.
"""

from pathlib import Path

import mintime as mt
from mintime.evaluation import InitialGaussianPolicy, cross_evaluate, evaluate_policy

RUN = Path(__file__).parent / "demo_run"
checkpoints = sorted(RUN.glob("checkpoint_*.npz"))
if not checkpoints:
    raise SystemExit(f"no checkpoints under {RUN}; run demos/03_train_minimum_time.py first")
ckpt = checkpoints[-1]
print(f"checkpoint: {ckpt.name}")

policy, info = mt.evaluation.load_policy(ckpt)
env_name = info["env"]

stats = evaluate_policy(policy, env_name, episodes=100, horizon=2000, seed=5)
print(
    f"metrics over 100 x 2000-step episodes: steps_to_goal={stats.mean_steps_to_goal:.0f}"
    f"+-{stats.stderr_steps_to_goal:.0f}, steps_on_goal={stats.mean_steps_on_goal:.0f}"
    f"+-{stats.stderr_steps_on_goal:.0f}, reached {stats.reached_fraction:.0%}"
)

baseline = InitialGaussianPolicy(policy.act_dim if hasattr(policy, "act_dim") else 2, seed=0)
print(f"\n{'formulation':>12} {'trained return':>16} {'random return':>15}")
for kind in mt.FORMULATIONS:
    spec = mt.FormulationSpec(kind, episode_length_T=1000, timeout=25, reset_penalty_K=20.0)
    trained = cross_evaluate(ckpt, spec, episodes=30, seed=7, max_segments=5)
    random_ = cross_evaluate(baseline, spec, episodes=30, env=env_name, seed=7, max_segments=5)
    print(f"{kind:>12} {trained.mean_return:>16.1f} {random_.mean_return:>15.1f}")
