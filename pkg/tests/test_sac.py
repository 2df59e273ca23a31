"""SAC agent: configuration conformance, targets, gradients, determinism,
small-instance oracle equivalence, and checkpointing."""

import numpy as np
import pytest

import mintime as mt
from mintime.agent import SacAgent, SacConfig, TrainingDiverged, check_gradient, soft_backup
from mintime.agent.mlp import flatten_grads


def _random_batch(rng, n, obs_dim, act_dim):
    return {
        "obs": rng.normal(size=(n, obs_dim)),
        "actions": np.tanh(rng.normal(size=(n, act_dim))),
        "rewards": rng.normal(size=n),
        "next_obs": rng.normal(size=(n, obs_dim)),
        "continuation": rng.integers(0, 2, size=n).astype(float),
    }


def test_config_defaults_match_published_table():
    cfg = SacConfig()
    assert cfg.buffer_capacity == 100_000
    assert cfg.actor_lr == 3e-4
    assert cfg.critic_lr == 3e-4
    assert cfg.temp_lr == 3e-4
    assert cfg.batch_size == 256
    assert cfg.gamma == 0.99
    assert cfg.update_every_k == 2
    assert cfg.epochs_per_update == 1
    assert cfg.warmup_steps == 1000
    assert cfg.adam_betas == (0.9, 0.999)
    assert cfg.init_temperature == 0.1
    assert cfg.hidden_sizes == (512, 512)


def test_config_validation():
    with pytest.raises(ValueError):
        SacConfig(batch_size=0)
    with pytest.raises(ValueError):
        SacConfig(batch_size=200, buffer_capacity=100)
    with pytest.raises(ValueError):
        SacConfig(gamma=1.5)


def test_target_entropy_defaults_to_negative_action_dim():
    agent = SacAgent(4, 3, SacConfig(hidden_sizes=(8,)), seed=0)
    assert agent.target_entropy == -3.0


def test_soft_backup_examples():
    assert soft_backup(-1.0, 1.0, -10.0, 0.0, alpha=0.1, gamma=0.99) == pytest.approx(-10.9)
    assert soft_backup(0.7, 1.0, -10.0, 3.0, alpha=0.5, gamma=0.0) == 0.7
    assert soft_backup(-1.0, 0.0, -99.0, 5.0, alpha=0.1, gamma=0.99) == -1.0


def test_tau_one_copies_online_into_target():
    agent = SacAgent(3, 2, SacConfig(hidden_sizes=(8, 8)), seed=1)
    rng = np.random.default_rng(0)
    agent.q1.weights[0] += rng.normal(size=agent.q1.weights[0].shape)
    agent.soft_update(tau=1.0)
    for w_t, w_o in zip(agent.q1_target.weights, agent.q1.weights):
        np.testing.assert_array_equal(w_t, w_o)


def test_update_loss_sequence_is_reproducible():
    def run():
        agent = SacAgent(4, 2, SacConfig(hidden_sizes=(16, 16), batch_size=8), seed=7)
        buf = agent.make_buffer()
        rng = np.random.default_rng(3)
        for _ in range(64):
            buf.push(rng.normal(size=4), np.tanh(rng.normal(size=2)), -1.0, rng.normal(size=4), 1.0)
        return [agent.update(buf)["critic_loss"] for _ in range(10)]

    assert run() == run()


def test_alpha_stays_positive():
    agent = SacAgent(3, 1, SacConfig(hidden_sizes=(8, 8), batch_size=8, init_temperature=0.01), seed=2)
    buf = agent.make_buffer()
    rng = np.random.default_rng(1)
    for _ in range(32):
        buf.push(rng.normal(size=3), np.tanh(rng.normal(size=1)), 0.0, rng.normal(size=3), 1.0)
    for _ in range(100):
        agent.update(buf)
        assert agent.alpha > 0.0


def test_non_finite_gradient_aborts():
    agent = SacAgent(3, 2, SacConfig(hidden_sizes=(8, 8), batch_size=4), seed=3)
    agent.q1.weights[0][0, 0] = np.nan
    batch = _random_batch(np.random.default_rng(0), 4, 3, 2)
    with pytest.raises(TrainingDiverged):
        agent.update_on_batch(batch)


def test_critic_gradients_match_finite_differences():
    rng = np.random.default_rng(42)
    agent = SacAgent(4, 2, SacConfig(hidden_sizes=(16, 16)), seed=3)
    batch = _random_batch(rng, 8, 4, 2)
    y = agent.backup_targets(batch, next_eps=rng.standard_normal((8, 2)))

    def loss_at(v):
        n1 = agent.q1.n_params
        agent.q1.set_flat(v[:n1])
        agent.q2.set_flat(v[n1:])
        return agent.critic_loss_and_grads(batch, y=y)[0]

    x0 = np.concatenate([agent.q1.get_flat(), agent.q2.get_flat()])
    _, (g1, g2) = agent.critic_loss_and_grads(batch, y=y)
    report = check_gradient(loss_at, np.concatenate([flatten_grads(g1), flatten_grads(g2)]), x0)
    agent.q1.set_flat(x0[: agent.q1.n_params])
    agent.q2.set_flat(x0[agent.q1.n_params :])
    assert report.passed(1e-4), str(report)


def test_actor_gradients_match_finite_differences():
    rng = np.random.default_rng(11)
    agent = SacAgent(4, 2, SacConfig(hidden_sizes=(16, 16), init_temperature=0.3), seed=5)
    batch = _random_batch(rng, 8, 4, 2)
    eps = rng.standard_normal((8, 2))

    def loss_at(v):
        agent.actor.net.set_flat(v)
        return agent.actor_loss_and_grads(batch, eps)[0]

    x0 = agent.actor.net.get_flat()
    _, grads, _ = agent.actor_loss_and_grads(batch, eps)
    report = check_gradient(loss_at, flatten_grads(grads), x0)
    agent.actor.net.set_flat(x0)
    assert report.passed(1e-4), str(report)


def test_temperature_gradient_matches_finite_differences():
    agent = SacAgent(4, 2, SacConfig(hidden_sizes=(8, 8)), seed=6)
    mean_logp = -1.7

    def loss_at(v):
        saved = agent.log_alpha
        agent.log_alpha = float(v[0])
        loss = agent.temperature_loss_and_grad(mean_logp)[0]
        agent.log_alpha = saved
        return loss

    loss, grad = agent.temperature_loss_and_grad(mean_logp)
    report = check_gradient(loss_at, np.array([grad]), np.array([agent.log_alpha]))
    assert report.max_rel_error < 1e-8


def test_critic_converges_to_value_iteration_on_two_state_cycle():
    # Deterministic 2-state cycle where the action is irrelevant: s0 -> s1
    # with reward 0, s1 -> s0 with reward 1.  With alpha=0 and deterministic
    # next actions, the critic must converge to the value-iteration fixpoint.
    gamma = 0.9
    s0, s1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])

    v = np.zeros(2)  # brute-force value iteration oracle
    for _ in range(600):
        v = np.array([0.0 + gamma * v[1], 1.0 + gamma * v[0]])

    cfg = SacConfig(hidden_sizes=(32, 32), batch_size=64, gamma=gamma, critic_lr=3e-3)
    agent = SacAgent(2, 1, cfg, seed=8)
    buf = agent.make_buffer()
    rng = np.random.default_rng(4)
    for _ in range(256):
        a = rng.uniform(-1, 1, size=1)
        buf.push(s0, a, 0.0, s1, 1.0)
        buf.push(s1, rng.uniform(-1, 1, size=1), 1.0, s0, 1.0)
    for _ in range(4000):
        batch = buf.sample(64, agent._batch_rng)
        agent._critic_step(batch, alpha=0.0, deterministic_next=True)
        agent.soft_update(tau=0.02)

    for state, target in ((s0, v[0]), (s1, v[1])):
        for a in (-0.7, 0.0, 0.7):
            q = float(agent.q1(np.concatenate([state, [a]])[None, :])[0, 0])
            assert q == pytest.approx(target, abs=1e-2)


def test_checkpoint_roundtrip(tmp_path):
    agent = SacAgent(6, 2, SacConfig(hidden_sizes=(16, 16)), seed=9)
    buf = agent.make_buffer()
    rng = np.random.default_rng(5)
    for _ in range(64):
        buf.push(rng.normal(size=6), np.tanh(rng.normal(size=2)), -1.0, rng.normal(size=6), 1.0)
    for _ in range(5):
        agent.update(buf)
    path = tmp_path / "ckpt.npz"
    agent.save(path, step=123, seed=9, run_info={"env": "point_reacher_easy", "formulation": "mintime"})

    loaded, meta = SacAgent.load(path)
    assert meta["step"] == 123
    assert meta["run_info"]["env"] == "point_reacher_easy"
    assert loaded.config == agent.config
    obs = rng.normal(size=6)
    np.testing.assert_array_equal(loaded.act(obs, deterministic=True), agent.act(obs, deterministic=True))
    assert loaded.log_alpha == agent.log_alpha


def test_exploration_stream_is_seeded():
    a1 = SacAgent(3, 2, SacConfig(hidden_sizes=(8,)), seed=10)
    a2 = SacAgent(3, 2, SacConfig(hidden_sizes=(8,)), seed=10)
    obs = np.zeros(3)
    np.testing.assert_array_equal(a1.act(obs), a2.act(obs))
    np.testing.assert_array_equal(a1.initial_action(), a2.initial_action())
    a3 = SacAgent(3, 2, SacConfig(hidden_sizes=(8,)), seed=11)
    assert not np.array_equal(a1.act(obs), a3.act(obs))
