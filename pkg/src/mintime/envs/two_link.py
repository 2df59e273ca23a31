"""Planar two-link arm reaching a round target with its fingertip.

Joint dynamics are deliberately decoupled (per-joint torque, viscous
damping, unit inertia, semi-implicit Euler) so the task keeps the structure
of precise arm reaching while staying cheap enough to brute-force in tests.
The observation is fingertip-centric: position, velocity, and the vector
from the fingertip to the target.
"""

import numpy as np

from ..core import GoalReachEnv

L1 = 0.12
L2 = 0.12
DT = 0.02
DAMPING = 0.1
TORQUE_MAX = 1.0
INERTIA = 1.0
V_TOL = 0.1

GOAL_R_MIN = 0.05
GOAL_R_MAX = 0.20

EASY_RADIUS = 0.05
# 0.025 is the smallest hard target at which some timeout lets the initial
# policy hit often enough (>=10 per 20K steps) for the learnability heuristic
# to have a positive case on this arm.
HARD_RADIUS = 0.025


def forward_kinematics(theta) -> np.ndarray:
    """Fingertip position of the two-link arm at joint angles ``theta``."""
    t1, t12 = theta[0], theta[0] + theta[1]
    return np.array([L1 * np.cos(t1) + L2 * np.cos(t12), L1 * np.sin(t1) + L2 * np.sin(t12)])


def fingertip_velocity(theta, theta_dot) -> np.ndarray:
    """Cartesian fingertip velocity (Jacobian times joint velocity)."""
    t1, t12 = theta[0], theta[0] + theta[1]
    s1, c1 = np.sin(t1), np.cos(t1)
    s12, c12 = np.sin(t12), np.cos(t12)
    jac = np.array([[-L1 * s1 - L2 * s12, -L2 * s12], [L1 * c1 + L2 * c12, L2 * c12]])
    return jac @ theta_dot


class TwoLinkReacher(GoalReachEnv):
    action_dim = 2
    observation_dim = 6
    observation_layout = (("fingertip_pos", 2), ("fingertip_vel", 2), ("to_target", 2))
    v_tol = V_TOL

    def __init__(self, target_radius: float = EASY_RADIUS, seed: int | None = None):
        self.name = "two_link"
        self.target_radius = float(target_radius)
        self._rng = np.random.default_rng(seed)
        self.theta = np.zeros(2)
        self.theta_dot = np.zeros(2)
        self.goal = np.zeros(2)

    def reset(self, seed=None):
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        # Area-uniform over the reachable annulus.
        r = np.sqrt(self._rng.uniform(GOAL_R_MIN**2, GOAL_R_MAX**2))
        phi = self._rng.uniform(-np.pi, np.pi)
        self.goal = np.array([r * np.cos(phi), r * np.sin(phi)])
        return self.resample_start()

    def resample_start(self):
        self.theta = self._rng.uniform(-np.pi, np.pi, size=2)
        self.theta_dot = np.zeros(2)
        return self.observe()

    def step_dynamics(self, action):
        torque = TORQUE_MAX * np.asarray(action, dtype=float)
        accel = (torque - DAMPING * self.theta_dot) / INERTIA
        self.theta_dot = self.theta_dot + DT * accel
        self.theta = self.theta + DT * self.theta_dot
        return self.observe()

    def fingertip(self):
        return forward_kinematics(self.theta)

    def observe(self):
        tip = self.fingertip()
        vel = fingertip_velocity(self.theta, self.theta_dot)
        return np.concatenate([tip, vel, self.goal - tip])

    def goal_distance(self):
        return float(np.linalg.norm(self.goal - self.fingertip()))

    def in_goal(self):
        return self.goal_distance() <= self.target_radius

    def mintime_terminated(self):
        if not self.in_goal():
            return False
        vel = fingertip_velocity(self.theta, self.theta_dot)
        return float(np.hypot(vel[0], vel[1])) <= self.v_tol
