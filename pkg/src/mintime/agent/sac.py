"""Soft Actor-Critic with twin critics, soft target updates, and automatic
entropy temperature, built on the hand-differentiated MLPs.

All randomness flows from one seed through named substreams (network init,
exploration, warmup actions, batch sampling, update-time noise), so a frozen
buffer and fixed seed reproduce the loss sequence bit-for-bit.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .mlp import Adam, Mlp, ScalarAdam
from .policy import SquashedGaussianPolicy
from .replay import ReplayBuffer


class TrainingDiverged(RuntimeError):
    """Raised when a loss or gradient goes non-finite; aborts the run."""


@dataclass
class SacConfig:
    buffer_capacity: int = 100_000
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    temp_lr: float = 3e-4
    batch_size: int = 256
    gamma: float = 0.99
    update_every_k: int = 2
    epochs_per_update: int = 1
    warmup_steps: int = 1000
    adam_betas: tuple = (0.9, 0.999)
    init_temperature: float = 0.1
    hidden_sizes: tuple = (512, 512)
    # Not in the published hyper-parameter table; standard SAC choices.
    target_smoothing_tau: float = 0.005
    target_entropy: float | None = None  # None resolves to -action_dim
    # float64 keeps finite-difference gradient checks tight; float32 is the
    # usual training precision and roughly 3x faster on CPU.
    dtype: str = "float64"

    def __post_init__(self):
        object.__setattr__(self, "adam_betas", tuple(float(b) for b in self.adam_betas))
        object.__setattr__(self, "hidden_sizes", tuple(int(h) for h in self.hidden_sizes))
        for name in (
            "buffer_capacity",
            "actor_lr",
            "critic_lr",
            "temp_lr",
            "batch_size",
            "gamma",
            "update_every_k",
            "epochs_per_update",
            "warmup_steps",
            "init_temperature",
            "target_smoothing_tau",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.batch_size > self.buffer_capacity:
            raise ValueError("batch_size cannot exceed buffer_capacity")
        if not 0 < self.gamma <= 1:
            raise ValueError("gamma must be in (0, 1]")
        if not 0 < self.target_smoothing_tau <= 1:
            raise ValueError("target_smoothing_tau must be in (0, 1]")
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden sizes must be positive")
        if self.dtype not in ("float64", "float32"):
            raise ValueError("dtype must be 'float64' or 'float32'")

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)


def soft_backup(reward, continuation, min_next_q, next_log_prob, alpha, gamma):
    """Entropy-regularized one-step bootstrap target:
    y = r + gamma * continuation * (min Q'(s', a') - alpha * log pi(a'|s'))."""
    return reward + gamma * continuation * (min_next_q - alpha * next_log_prob)


class SacAgent:
    def __init__(self, obs_dim: int, act_dim: int, config: SacConfig | None = None, seed: int = 0):
        self.config = config or SacConfig()
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        cfg = self.config

        ss = np.random.SeedSequence(seed)
        s_actor, s_q1, s_q2, s_explore, s_warmup, s_batch, s_update = ss.spawn(7)
        dtype = cfg.np_dtype
        self.actor = SquashedGaussianPolicy(
            obs_dim, act_dim, cfg.hidden_sizes, np.random.default_rng(s_actor), dtype=dtype
        )
        critic_sizes = [obs_dim + act_dim, *cfg.hidden_sizes, 1]
        self.q1 = Mlp(critic_sizes, np.random.default_rng(s_q1), dtype=dtype)
        self.q2 = Mlp(critic_sizes, np.random.default_rng(s_q2), dtype=dtype)
        self.q1_target = self.q1.copy()
        self.q2_target = self.q2.copy()

        self.log_alpha = float(np.log(cfg.init_temperature))
        self.target_entropy = float(cfg.target_entropy if cfg.target_entropy is not None else -act_dim)

        self._opt_actor = Adam(self.actor.net, cfg.actor_lr, cfg.adam_betas)
        self._opt_q1 = Adam(self.q1, cfg.critic_lr, cfg.adam_betas)
        self._opt_q2 = Adam(self.q2, cfg.critic_lr, cfg.adam_betas)
        self._opt_alpha = ScalarAdam(cfg.temp_lr, cfg.adam_betas)

        self._explore_rng = np.random.default_rng(s_explore)
        self._warmup_rng = np.random.default_rng(s_warmup)
        self._batch_rng = np.random.default_rng(s_batch)
        self._update_rng = np.random.default_rng(s_update)
        self.update_count = 0

    @property
    def alpha(self) -> float:
        return float(np.exp(self.log_alpha))

    def make_buffer(self) -> ReplayBuffer:
        return ReplayBuffer(self.config.buffer_capacity, self.obs_dim, self.act_dim)

    # -- acting -------------------------------------------------------------

    def act(self, obs, deterministic: bool = False) -> np.ndarray:
        obs = np.asarray(obs, dtype=float)
        single = obs.ndim == 1
        batch = np.atleast_2d(obs)
        if deterministic:
            action = self.actor.mean_action(batch)
        else:
            eps = self._explore_rng.standard_normal((batch.shape[0], self.act_dim))
            action, _ = self.actor.sample(batch, eps)
        return action[0] if single else action

    def initial_action(self) -> np.ndarray:
        """Warmup-phase action: tanh of a standard normal draw, the same
        distribution the timeout probe uses for the untrained policy."""
        return np.tanh(self._warmup_rng.standard_normal(self.act_dim))

    # -- learning -----------------------------------------------------------

    def update(self, buffer: ReplayBuffer) -> dict:
        """One update call: ``epochs_per_update`` gradient steps on critics,
        actor, and temperature, each followed by a soft target update."""
        losses = {}
        for _ in range(self.config.epochs_per_update):
            batch = buffer.sample(self.config.batch_size, self._batch_rng)
            losses = self.update_on_batch(batch)
        return losses

    def _cast_batch(self, batch: dict) -> dict:
        dtype = self.config.np_dtype
        return {k: np.asarray(v, dtype=dtype) for k, v in batch.items()}

    def update_on_batch(self, batch: dict) -> dict:
        batch = self._cast_batch(batch)
        alpha = self.alpha
        critic_loss = self._critic_step(batch, alpha)
        actor_loss, mean_logp = self._actor_step(batch, alpha)
        temp_loss = self._temperature_step(mean_logp)
        self.soft_update()
        self.update_count += 1
        if not all(np.isfinite(v) for v in (critic_loss, actor_loss, temp_loss, self.log_alpha)):
            raise TrainingDiverged(
                f"non-finite quantity at update {self.update_count}: "
                f"critic={critic_loss!r} actor={actor_loss!r} temperature={temp_loss!r} "
                f"log_alpha={self.log_alpha!r}"
            )
        return {
            "critic_loss": critic_loss,
            "actor_loss": actor_loss,
            "temperature_loss": temp_loss,
            "alpha": alpha,
            "entropy_estimate": -mean_logp,
        }

    def backup_targets(self, batch, next_eps=None, alpha=None, deterministic_next=False) -> np.ndarray:
        """Bootstrap targets y for a batch, using a fresh (or supplied)
        policy sample at the next observation and the target critics."""
        next_obs = batch["next_obs"]
        if alpha is None:
            alpha = self.alpha
        if deterministic_next:
            a_next = self.actor.mean_action(next_obs)
            logp_next = np.zeros(next_obs.shape[0])
        else:
            if next_eps is None:
                next_eps = self._update_rng.standard_normal((next_obs.shape[0], self.act_dim))
            a_next, logp_next = self.actor.sample(next_obs, next_eps)
        dtype = self.config.np_dtype
        x_next = np.concatenate([np.asarray(next_obs, dtype=dtype), a_next], axis=1)
        min_q = np.minimum(self.q1_target(x_next).ravel(), self.q2_target(x_next).ravel())
        rewards = np.asarray(batch["rewards"], dtype=dtype)
        continuation = np.asarray(batch["continuation"], dtype=dtype)
        return soft_backup(rewards, continuation, min_q, logp_next, alpha, self.config.gamma)

    def critic_loss_and_grads(self, batch, y=None, next_eps=None):
        """Summed squared-error loss of both critics against targets y, and
        its gradients; pure (no parameter update)."""
        if y is None:
            y = self.backup_targets(batch, next_eps=next_eps)
        dtype = self.config.np_dtype
        x = np.concatenate(
            [np.asarray(batch["obs"], dtype=dtype), np.asarray(batch["actions"], dtype=dtype)], axis=1
        )
        y = np.asarray(y, dtype=dtype)
        n = x.shape[0]
        total = 0.0
        grads = []
        for q in (self.q1, self.q2):
            pred, cache = q.forward(x)
            err = pred.ravel() - y
            total += float(np.mean(err**2))
            g, _ = q.backward(cache, (2.0 / n) * err[:, None])
            grads.append(g)
        return total, grads

    def _critic_step(self, batch, alpha, deterministic_next=False) -> float:
        y = self.backup_targets(batch, alpha=alpha, deterministic_next=deterministic_next)
        loss, (g1, g2) = self.critic_loss_and_grads(batch, y=y)
        self._check_grads(g1, "critic 1")
        self._check_grads(g2, "critic 2")
        self._opt_q1.step(g1)
        self._opt_q2.step(g2)
        return loss

    def actor_loss_and_grads(self, batch, eps, alpha=None):
        """Policy loss mean(alpha * log pi - min Q) under a fixed noise draw,
        with gradients through both the density and the critic's action
        input; pure (no parameter update)."""
        if alpha is None:
            alpha = self.alpha
        dtype = self.config.np_dtype
        obs = np.asarray(batch["obs"], dtype=dtype)
        n = obs.shape[0]
        action, logp, aux = self.actor.sample_with_cache(obs, eps)
        x = np.concatenate([obs, action], axis=1)
        out1, c1 = self.q1.forward(x)
        out2, c2 = self.q2.forward(x)
        q1v, q2v = out1.ravel(), out2.ravel()
        use_q1 = q1v <= q2v
        qmin = np.where(use_q1, q1v, q2v)
        loss = float(np.mean(alpha * logp - qmin))
        scale = -1.0 / n
        gin1 = self.q1.backward_input(c1, scale * use_q1[:, None].astype(dtype))
        gin2 = self.q2.backward_input(c2, scale * (~use_q1)[:, None].astype(dtype))
        d_action = (gin1 + gin2)[:, self.obs_dim :]
        d_logp = np.full(n, alpha / n, dtype=dtype)
        grads = self.actor.backward_sample(aux, d_logp, d_action)
        return loss, grads, logp

    def _actor_step(self, batch, alpha):
        eps = self._update_rng.standard_normal((batch["obs"].shape[0], self.act_dim))
        loss, grads, logp = self.actor_loss_and_grads(batch, eps, alpha)
        self._check_grads(grads, "actor")
        self._opt_actor.step(grads)
        return loss, float(np.mean(logp))

    def temperature_loss_and_grad(self, mean_logp: float):
        """Temperature objective -log_alpha * (E[log pi] + target_entropy)
        and its derivative with respect to log_alpha."""
        gap = mean_logp + self.target_entropy
        return -self.log_alpha * gap, -gap

    def _temperature_step(self, mean_logp: float) -> float:
        loss, grad = self.temperature_loss_and_grad(mean_logp)
        self.log_alpha = self._opt_alpha.step(self.log_alpha, grad)
        return loss

    def soft_update(self, tau: float | None = None) -> None:
        if tau is None:
            tau = self.config.target_smoothing_tau
        for target, online in ((self.q1_target, self.q1), (self.q2_target, self.q2)):
            for i in range(len(online.weights)):
                target.weights[i] *= 1.0 - tau
                target.weights[i] += tau * online.weights[i]
                target.biases[i] *= 1.0 - tau
                target.biases[i] += tau * online.biases[i]

    @staticmethod
    def _check_grads(grads, label: str) -> None:
        grads_w, grads_b = grads
        total = sum(float(g.sum()) for g in grads_w) + sum(float(g.sum()) for g in grads_b)
        if not np.isfinite(total):
            raise TrainingDiverged(f"non-finite gradient in {label} update")

    # -- checkpointing --------------------------------------------------------
    # Layout (numpy .npz): a JSON string under "meta" carrying format_version,
    # obs_dim/act_dim, the full config, step, seed, and free-form run info;
    # "log_alpha"; and one array per tensor named "<net>.W<i>" / "<net>.b<i>"
    # for net in actor, q1, q2, q1_target, q2_target.

    def _named_nets(self):
        return {
            "actor": self.actor.net,
            "q1": self.q1,
            "q2": self.q2,
            "q1_target": self.q1_target,
            "q2_target": self.q2_target,
        }

    def save(self, path, step: int = 0, seed: int | None = None, run_info: dict | None = None) -> None:
        cfg = asdict(self.config)
        cfg["adam_betas"] = list(cfg["adam_betas"])
        cfg["hidden_sizes"] = list(cfg["hidden_sizes"])
        meta = {
            "format_version": 1,
            "obs_dim": self.obs_dim,
            "act_dim": self.act_dim,
            "config": cfg,
            "step": int(step),
            "seed": seed,
            "run_info": run_info or {},
        }
        arrays = {}
        for name, net in self._named_nets().items():
            for i, (w, b) in enumerate(zip(net.weights, net.biases)):
                arrays[f"{name}.W{i}"] = w
                arrays[f"{name}.b{i}"] = b
        np.savez(path, meta=json.dumps(meta), log_alpha=np.float64(self.log_alpha), **arrays)

    @classmethod
    def load(cls, path):
        """Rebuild an agent from a checkpoint; returns (agent, meta)."""
        with np.load(path, allow_pickle=False) as data:
            meta = json.loads(str(data["meta"]))
            cfg = dict(meta["config"])
            config = SacConfig(**cfg)
            agent = cls(meta["obs_dim"], meta["act_dim"], config, seed=0)
            for name, net in agent._named_nets().items():
                for i in range(len(net.weights)):
                    net.weights[i] = data[f"{name}.W{i}"].copy()
                    net.biases[i] = data[f"{name}.b{i}"].copy()
            agent.log_alpha = float(data["log_alpha"])
        return agent, meta
