"""The time limit is a solution parameter: probe before you train.

Stepping an environment with the untrained policy (tanh of N(0,1) draws)
for 20K steps and counting goal terminations shows how strongly the choice
of timeout drives early goal coverage.  The heuristic: at least 10 hits per
20K steps predicts that minimum-time training will take off, because the
replay buffer then keeps enough goal transitions in reach of the sampler.

Takes a few minutes; trim REPEATS or the grids to go faster.
"""

import numpy as np

import mintime as mt

REPEATS = 3
GRIDS = {
    "point_reacher_easy": [10, 25, 50, 100, 200, 500],
    "two_link_hard": [10, 25, 50, 100, 200, 500],
    "mountain_car": [200, 1000],  # the classic hard-exploration case: ~0 hits
}

for env_name, grid in GRIDS.items():
    print(f"\n{env_name}")
    print(f"  {'timeout':>8} {'mean hits':>10}  verdict")
    reports = mt.sweep_timeouts(env_name, grid, repeats=REPEATS, master_seed=1)
    by_timeout = {}
    for rep in reports:
        by_timeout.setdefault(rep.timeout, []).append(rep)
    for timeout, reps in by_timeout.items():
        mean_hits = float(np.mean([r.hits for r in reps]))
        learnable = all(mt.learnability_verdict(r) for r in reps)
        any_learnable = any(mt.learnability_verdict(r) for r in reps)
        verdict = "learnable" if learnable else ("borderline" if any_learnable else "not learnable")
        print(f"  {timeout:>8} {mean_hits:>10.1f}  {verdict}")
