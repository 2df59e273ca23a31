"""Classic underpowered-car-on-a-hill benchmark with a continuous action.

The canonical minimum-time control task: the car must build momentum by
rocking across the valley before it can climb to the flag.  Constants follow
the standard benchmark; the goal is position-only, so minimum-time
termination ignores velocity here.
"""

import math

import numpy as np

from ..core import GoalReachEnv

X_MIN = -1.2
X_MAX = 0.6
V_LIM = 0.07
GOAL_X = 0.45
FORCE = 0.001
GRAVITY = 0.0025

START_X_LOW = -0.6
START_X_HIGH = -0.4


class MountainCar(GoalReachEnv):
    action_dim = 1
    observation_dim = 2
    observation_layout = (("position", 1), ("velocity", 1))
    v_tol = V_LIM  # any legal speed counts as stopped: the goal is position-only

    def __init__(self, seed: int | None = None):
        self.name = "mountain_car"
        self.goal_x = GOAL_X
        self._rng = np.random.default_rng(seed)
        self.x = 0.0
        self.v = 0.0

    def reset(self, seed=None):
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        return self.resample_start()

    def resample_start(self):
        self.x = float(self._rng.uniform(START_X_LOW, START_X_HIGH))
        self.v = 0.0
        return self.observe()

    def step_dynamics(self, action):
        a = float(np.asarray(action).reshape(-1)[0])
        v = self.v + FORCE * a - GRAVITY * math.cos(3.0 * self.x)
        v = min(max(v, -V_LIM), V_LIM)
        x = self.x + v
        if x <= X_MIN:
            x, v = X_MIN, 0.0
        elif x > X_MAX:
            x = X_MAX
        self.x, self.v = x, v
        return self.observe()

    def observe(self):
        return np.array([self.x, self.v])

    def goal_distance(self):
        return max(self.goal_x - self.x, 0.0)

    def in_goal(self):
        return self.x >= self.goal_x

    def mintime_terminated(self):
        return self.in_goal()
