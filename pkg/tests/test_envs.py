"""Environment dynamics, goal predicates, determinism, and bounds."""

import math

import numpy as np
import pytest

import mintime as mt
from mintime.envs import make_env
from mintime.envs.two_link import forward_kinematics
from mintime.envs import mountain_car as mc
from mintime.envs import point_reacher as pr


def test_registry_names():
    assert set(mt.ENV_NAMES) == {
        "point_reacher_easy",
        "point_reacher_hard",
        "two_link_easy",
        "two_link_hard",
        "mountain_car",
    }
    with pytest.raises(ValueError):
        make_env("no_such_env")


def test_forward_kinematics_reference_points():
    np.testing.assert_allclose(forward_kinematics(np.array([0.0, 0.0])), [0.24, 0.0], atol=1e-15)
    np.testing.assert_allclose(forward_kinematics(np.array([np.pi / 2, 0.0])), [0.0, 0.24], atol=1e-15)
    # hand evaluation: (0.12*cos0 + 0.12*cos(pi/2), 0.12*sin0 + 0.12*sin(pi/2))
    np.testing.assert_allclose(forward_kinematics(np.array([0.0, np.pi / 2])), [0.12, 0.12], atol=1e-15)


def test_point_reacher_euler_update():
    env = make_env("point_reacher_easy")
    env.reset(seed=0)
    env.pos = np.zeros(2)
    env.vel = np.zeros(2)
    env.step_dynamics(np.array([1.0, 0.0]))
    np.testing.assert_allclose(env.vel, [0.05, 0.0])
    np.testing.assert_allclose(env.pos, [0.0025, 0.0])


def test_point_reacher_fixed_point():
    env = make_env("point_reacher_easy")
    env.reset(seed=0)
    env.pos = np.array([0.2, -0.3])
    env.vel = np.zeros(2)
    env.step_dynamics(np.zeros(2))
    np.testing.assert_array_equal(env.pos, [0.2, -0.3])
    np.testing.assert_array_equal(env.vel, [0.0, 0.0])


def test_point_reacher_wall_zeroes_velocity():
    env = make_env("point_reacher_easy")
    env.reset(seed=0)
    env.pos = np.array([1.0, 0.0])
    env.vel = np.array([0.9, 0.0])
    env.step_dynamics(np.array([1.0, 0.0]))
    assert env.pos[0] == 1.0
    assert env.vel[0] == 0.0


def test_mountain_car_valley_gravity():
    env = make_env("mountain_car")
    env.reset(seed=0)
    env.x, env.v = -0.5, 0.0
    env.step_dynamics(np.array([0.0]))
    assert env.v == pytest.approx(-0.0025 * math.cos(3 * -0.5))
    assert env.x == pytest.approx(-0.5 + env.v)


def test_mountain_car_left_wall():
    # arrive at the wall with leftward speed an inward push cannot cancel
    env = make_env("mountain_car")
    env.reset(seed=0)
    env.x, env.v = -1.19, -0.05
    env.step_dynamics(np.array([-1.0]))
    assert env.x == -1.2
    assert env.v == 0.0


def test_mountain_car_cannot_reach_goal_in_one_step():
    env = make_env("mountain_car")
    env.reset(seed=0)
    env.x, env.v = -0.5, 0.0
    env.step_dynamics(np.array([1.0]))
    assert not env.in_goal()


def test_mountain_car_terminates_on_position_alone():
    env = make_env("mountain_car")
    env.reset(seed=0)
    env.x, env.v = 0.45, -0.07
    assert env.in_goal()
    assert env.mintime_terminated()


def test_mountain_car_start_within_track():
    for seed in range(30):
        env = make_env("mountain_car")
        env.reset(seed=seed)
        assert mc.X_MIN <= env.x <= mc.X_MAX
        assert env.x == pytest.approx(np.clip(env.x, mc.START_X_LOW, mc.START_X_HIGH))


def test_observation_layouts():
    env = make_env("two_link_easy")
    obs = env.reset(seed=0)
    assert obs.shape == (6,)
    assert [name for name, _ in env.observation_layout] == ["fingertip_pos", "fingertip_vel", "to_target"]
    tip = forward_kinematics(env.theta)
    np.testing.assert_allclose(obs[:2], tip)
    np.testing.assert_allclose(obs[4:], env.goal - tip)

    env = make_env("point_reacher_easy")
    obs = env.reset(seed=0)
    assert obs.shape == (6,)
    np.testing.assert_allclose(obs[4:], env.goal - env.pos)
    assert [name for name, _ in env.observation_layout] == ["position", "velocity", "to_target"]

    env = make_env("mountain_car")
    assert env.reset(seed=0).shape == (2,)


def test_seeded_reset_is_bit_identical():
    for name in mt.ENV_NAMES:
        a = make_env(name).reset(seed=7)
        b = make_env(name).reset(seed=7)
        np.testing.assert_array_equal(a, b)


def test_trajectory_determinism():
    for name in mt.ENV_NAMES:
        rng = np.random.default_rng(3)
        actions = np.tanh(rng.standard_normal((200, make_env(name).action_dim)))
        trajs = []
        for _ in range(2):
            env = make_env(name)
            env.reset(seed=11)
            trajs.append(np.stack([env.step_dynamics(a) for a in actions]))
        np.testing.assert_array_equal(trajs[0], trajs[1])


def test_two_link_goal_in_reachable_annulus():
    for seed in range(50):
        env = make_env("two_link_hard")
        env.reset(seed=seed)
        r = float(np.linalg.norm(env.goal))
        assert 0.05 <= r <= 0.20


def test_hard_target_smaller_than_easy():
    assert make_env("two_link_hard").target_radius < make_env("two_link_easy").target_radius
    assert make_env("point_reacher_hard").target_radius < make_env("point_reacher_easy").target_radius


def _bounds_violation(name, steps, seed):
    env = make_env(name)
    env.reset(seed=seed)
    rng = np.random.default_rng(seed + 1)
    tip_max = 0.0
    for _ in range(steps):
        env.step_dynamics(np.tanh(rng.standard_normal(env.action_dim)))
        if name.startswith("point_reacher"):
            if np.max(np.abs(env.pos)) > pr.BOX_HALF + 1e-12:
                return "pos out of box"
            if np.hypot(env.vel[0], env.vel[1]) > pr.V_MAX + 1e-12:
                return "speed above v_max"
        elif name.startswith("two_link"):
            tip_max = max(tip_max, float(np.linalg.norm(forward_kinematics(env.theta))))
            if tip_max > 0.24 + 1e-12:
                return "fingertip beyond reach"
        else:
            if not (mc.X_MIN <= env.x <= mc.X_MAX) or abs(env.v) > mc.V_LIM + 1e-15:
                return "state out of bounds"
    return None


@pytest.mark.parametrize("name", mt.ENV_NAMES)
def test_bounds_hold_under_random_actions(name):
    assert _bounds_violation(name, 20_000, seed=5) is None


@pytest.mark.slow
@pytest.mark.parametrize("name", mt.ENV_NAMES)
def test_bounds_hold_for_a_million_steps(name):
    assert _bounds_violation(name, 1_000_000, seed=17) is None
