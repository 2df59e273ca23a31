"""Squashed Gaussian policy: a Gaussian in pre-activation space pushed
through tanh onto the [-1, 1] action box.

Sampling uses the reparameterized form a = tanh(mu + sigma * eps) with
eps ~ N(0, I); the log-density subtracts the tanh change-of-variable term
sum_i log(1 - tanh(u_i)^2), computed in a softplus form that stays finite
for large |u|.
"""

import numpy as np

from .mlp import Mlp

LOG_STD_MIN = -10.0
LOG_STD_MAX = 2.0

LOG_2PI = float(np.log(2.0 * np.pi))
LOG_2 = float(np.log(2.0))


def softplus(x):
    return np.logaddexp(0.0, x)


def log1m_tanh_sq(u):
    """log(1 - tanh(u)^2), stable for large |u|."""
    return 2.0 * (LOG_2 - u - softplus(-2.0 * u))


class SquashedGaussianPolicy:
    """MLP trunk emitting per-dimension mean and log-std heads."""

    def __init__(self, obs_dim: int, act_dim: int, hidden_sizes, rng: np.random.Generator, dtype=np.float64):
        self.obs_dim = obs_dim
        self.act_dim = act_dim
        self.net = Mlp([obs_dim, *hidden_sizes, 2 * act_dim], rng, final_scale=0.01, dtype=dtype)

    def dist_params(self, obs):
        out, cache = self.net.forward(obs)
        mu = out[:, : self.act_dim]
        raw = out[:, self.act_dim :]
        log_std = np.clip(raw, LOG_STD_MIN, LOG_STD_MAX)
        return mu, log_std, raw, cache

    def mean_action(self, obs) -> np.ndarray:
        obs = np.asarray(obs, dtype=float)
        single = obs.ndim == 1
        mu, _, _, _ = self.dist_params(obs)
        a = np.tanh(mu)
        return a[0] if single else a

    def sample(self, obs, eps):
        """Reparameterized sample and its log-probability.

        ``eps`` must have shape (batch, act_dim); pass a fixed draw for
        deterministic replay.  Returns (action, log_prob) with log_prob of
        shape (batch,).
        """
        action, log_prob, _ = self.sample_with_cache(obs, eps)
        return action, log_prob

    def sample_with_cache(self, obs, eps):
        obs = np.atleast_2d(np.asarray(obs))
        eps = np.asarray(eps, dtype=self.net.dtype).reshape(obs.shape[0], self.act_dim)
        mu, log_std, raw, cache = self.dist_params(obs)
        sigma = np.exp(log_std)
        u = mu + sigma * eps
        action = np.tanh(u)
        gauss = -0.5 * eps**2 - log_std - 0.5 * LOG_2PI
        log_prob = np.sum(gauss - log1m_tanh_sq(u), axis=1)
        aux = (cache, action, log_std, raw, sigma, eps)
        return action, log_prob, aux

    def backward_sample(self, aux, d_log_prob, d_action):
        """Parameter gradients of a scalar loss given its derivatives with
        respect to the sampled log-prob (shape (B,)) and action (shape
        (B, act_dim)), for the fixed eps used at sampling time."""
        cache, action, log_std, raw, sigma, eps = aux
        gl = np.asarray(d_log_prob, dtype=self.net.dtype)[:, None]
        ga = np.asarray(d_action, dtype=self.net.dtype)
        one_m_a2 = 1.0 - action**2
        # d log_prob/d u = 2*tanh(u); d action/d u = 1 - tanh(u)^2
        d_u = gl * (2.0 * action) + ga * one_m_a2
        d_mu = d_u
        d_log_std = d_u * (sigma * eps) - gl
        d_log_std = d_log_std * ((raw > LOG_STD_MIN) & (raw < LOG_STD_MAX))
        grad_head = np.concatenate([d_mu, d_log_std], axis=1)
        grads, _ = self.net.backward(cache, grad_head)
        return grads

    def log_prob(self, obs, action):
        """Log-density of a given squashed action (for density checks)."""
        obs = np.atleast_2d(np.asarray(obs))
        action = np.atleast_2d(np.asarray(action, dtype=self.net.dtype))
        mu, log_std, _, _ = self.dist_params(obs)
        sigma = np.exp(log_std)
        u = np.arctanh(np.clip(action, -1.0 + 1e-15, 1.0 - 1e-15))
        z = (u - mu) / sigma
        gauss = -0.5 * z**2 - log_std - 0.5 * LOG_2PI
        return np.sum(gauss - log1m_tanh_sq(u), axis=1)
