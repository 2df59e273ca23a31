"""2D point-mass reacher: accelerate a point inside a box onto a round target.

A stand-in for the dot-reaching minimum-time benchmark: the action is a
normalized 2D acceleration, velocity is speed-clipped, and hitting a wall
zeroes the offending velocity component.
"""

import numpy as np

from ..core import GoalReachEnv

DT = 0.05
A_MAX = 1.0
V_MAX = 1.0
BOX_HALF = 1.0
# The point mass velocity random-walks (no damping), so a 0.1 tolerance made
# random-policy terminations too rare for the timeout probe to be meaningful;
# 0.25 keeps parking non-trivial while letting generous timeouts terminate.
V_TOL = 0.25

EASY_RADIUS = 0.10
HARD_RADIUS = 0.025


class PointReacher(GoalReachEnv):
    action_dim = 2
    observation_dim = 6
    observation_layout = (("position", 2), ("velocity", 2), ("to_target", 2))
    v_tol = V_TOL

    def __init__(self, target_radius: float = EASY_RADIUS, seed: int | None = None):
        self.name = "point_reacher"
        self.target_radius = float(target_radius)
        self._rng = np.random.default_rng(seed)
        self.pos = np.zeros(2)
        self.vel = np.zeros(2)
        self.goal = np.zeros(2)

    def reset(self, seed=None):
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        self.goal = self._rng.uniform(-BOX_HALF, BOX_HALF, size=2)
        return self.resample_start()

    def resample_start(self):
        self.pos = self._rng.uniform(-BOX_HALF, BOX_HALF, size=2)
        self.vel = np.zeros(2)
        return self.observe()

    def step_dynamics(self, action):
        vel = self.vel + np.asarray(action, dtype=float) * (A_MAX * DT)
        speed = float(np.hypot(vel[0], vel[1]))
        if speed > V_MAX:
            vel *= V_MAX / speed
        pos = self.pos + vel * DT
        for i in range(2):
            if pos[i] < -BOX_HALF:
                pos[i] = -BOX_HALF
                vel[i] = 0.0
            elif pos[i] > BOX_HALF:
                pos[i] = BOX_HALF
                vel[i] = 0.0
        self.pos, self.vel = pos, vel
        return self.observe()

    def observe(self):
        return np.concatenate([self.pos, self.vel, self.goal - self.pos])

    def goal_distance(self):
        return float(np.hypot(*(self.goal - self.pos)))

    def in_goal(self):
        return self.goal_distance() <= self.target_radius

    def mintime_terminated(self):
        return self.in_goal() and float(np.hypot(self.vel[0], self.vel[1])) <= self.v_tol
