"""One reaching task, three specifications.

The same two-link arm is wrapped in the three formulations of a
goal-reaching task.  A fixed PD-style controller steps each wrapper so the
differences come purely from the reward/termination rules:

* guiding  -- dense negative-distance reward plus an in-target bonus,
* contact  -- sparse 0/1 reward,
* mintime  -- constant -1 with termination at the goal (near-zero velocity),
              where exceeding the timeout resamples the start but keeps the
              goal and charges a reset penalty.
"""

import numpy as np

import mintime as mt


class ArmController:
    """Torque toward the target with damping; enough to reach from this
    start, far from optimal (it ignores the arm's geometry)."""

    def act(self, obs, deterministic=True):
        obs = np.atleast_2d(np.asarray(obs))
        action = np.clip(40.0 * obs[:, 4:6] - 15.0 * obs[:, 2:4], -1.0, 1.0)
        return action[0]


policy = ArmController()

for kind in mt.FORMULATIONS:
    spec = mt.FormulationSpec(kind, episode_length_T=200, timeout=100, reset_penalty_K=20.0)
    env = mt.make_env("two_link_easy")
    wrapper = mt.wrap(env, spec)
    obs = wrapper.reset(seed=0)
    total, steps = 0.0, 0
    while True:
        out = wrapper.step(policy.act(obs))
        obs = out.next_obs
        total += out.reward
        steps += 1
        if out.terminated or (out.truncated and kind != "mintime"):
            break
        if steps > 2000:
            break
    print(f"{kind:8s} return={total:8.2f} steps={steps}  "
          f"(terminated={out.terminated}, truncated={out.truncated})")

# The minimum-time accounting in isolation: a 100-step time limit with a
# reset penalty of 20, three timeouts, and success 25 steps after the last
# reset costs 100+20+100+20+100+20+25 in return and length.
record = mt.accumulate_episode([(100, True)] * 3 + [(25, False)], timeout_T=100, reset_penalty_K=20)
print(f"\nworked example: return={record.adjusted_return} length={record.adjusted_length} "
      f"reached_goal={record.reached_goal}")
