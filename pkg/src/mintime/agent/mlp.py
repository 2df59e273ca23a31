"""Small fully-connected networks with hand-derived backprop, in float64.

The gradients are exact reverse-mode derivatives for the fixed
linear/ReLU/linear shape; finite-difference checks in the test suite gate
their correctness.  Parameters live as (in, out) weight matrices and bias
vectors; a flat-vector view supports optimization-free inspection and
perturbation.
"""

import numpy as np


def relu(x):
    return np.maximum(x, 0.0)


class Mlp:
    """input -> hidden... -> output with ReLU hidden activations and a
    linear output layer.

    Weights and biases initialize uniformly at +-1/sqrt(fan_in); the output
    layer is additionally scaled by ``final_scale`` (policy heads use 0.01
    to keep early action distributions near zero).  ``dtype`` is float64 by
    default (gradient checks assume it); float32 roughly triples training
    throughput at no practical cost to control performance.
    """

    def __init__(self, sizes, rng: np.random.Generator, final_scale: float = 1.0, dtype=np.float64):
        self.sizes = tuple(int(s) for s in sizes)
        if len(self.sizes) < 2:
            raise ValueError("need at least an input and an output size")
        self.dtype = np.dtype(dtype)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for i, (n_in, n_out) in enumerate(zip(self.sizes[:-1], self.sizes[1:])):
            bound = 1.0 / np.sqrt(n_in)
            w = rng.uniform(-bound, bound, size=(n_in, n_out))
            b = rng.uniform(-bound, bound, size=n_out)
            if i == len(self.sizes) - 2:
                w = w * final_scale
                b = b * final_scale
            self.weights.append(w.astype(self.dtype))
            self.biases.append(b.astype(self.dtype))

    def forward(self, x: np.ndarray):
        """Returns (output, cache); the cache holds the layer inputs and
        pre-activations needed by :meth:`backward`."""
        x = np.atleast_2d(np.asarray(x, dtype=self.dtype))
        inputs = [x]
        pre_acts = []
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            pre_acts.append(z)
            h = z if i == last else relu(z)
            if i != last:
                inputs.append(h)
        return h, (inputs, pre_acts)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, cache, grad_out: np.ndarray):
        """Backpropagate ``grad_out`` (d loss / d output, shape (B, out)).

        Returns (param_grads, grad_input) where param_grads matches the
        (weights, biases) structure and grad_input is d loss / d input.
        """
        inputs, pre_acts = cache
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.biases)
        dz = np.asarray(grad_out, dtype=self.dtype)
        for i in range(len(self.weights) - 1, -1, -1):
            grads_w[i] = inputs[i].T @ dz
            grads_b[i] = dz.sum(axis=0)
            da = dz @ self.weights[i].T
            if i > 0:
                dz = da * (pre_acts[i - 1] > 0)
            else:
                grad_input = da
        return (grads_w, grads_b), grad_input

    def backward_input(self, cache, grad_out: np.ndarray) -> np.ndarray:
        """d loss / d input only, skipping parameter-gradient work (used
        when differentiating through a frozen network)."""
        inputs, pre_acts = cache
        dz = np.asarray(grad_out, dtype=self.dtype)
        for i in range(len(self.weights) - 1, -1, -1):
            da = dz @ self.weights[i].T
            if i > 0:
                dz = da * (pre_acts[i - 1] > 0)
        return da

    # -- flat parameter plumbing (gradient checks, checkpoints) ------------

    @property
    def n_params(self) -> int:
        return sum(w.size for w in self.weights) + sum(b.size for b in self.biases)

    def get_flat(self) -> np.ndarray:
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b.ravel())
        return np.concatenate(parts)

    def set_flat(self, vec: np.ndarray) -> None:
        vec = np.asarray(vec, dtype=self.dtype)
        if vec.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} parameters, got {vec.shape}")
        k = 0
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            self.weights[i] = vec[k : k + w.size].reshape(w.shape).copy()
            k += w.size
            self.biases[i] = vec[k : k + b.size].copy()
            k += b.size

    def copy(self) -> "Mlp":
        dup = object.__new__(Mlp)
        dup.sizes = self.sizes
        dup.dtype = self.dtype
        dup.weights = [w.copy() for w in self.weights]
        dup.biases = [b.copy() for b in self.biases]
        return dup


def flatten_grads(grads) -> np.ndarray:
    grads_w, grads_b = grads
    parts = []
    for gw, gb in zip(grads_w, grads_b):
        parts.append(gw.ravel())
        parts.append(gb.ravel())
    return np.concatenate(parts)


class Adam:
    """Adam over one network's (weights, biases) structure, in place."""

    def __init__(self, net: Mlp, lr: float, betas=(0.9, 0.999), eps: float = 1e-8):
        self.net = net
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self.m_w = [np.zeros_like(w) for w in net.weights]
        self.v_w = [np.zeros_like(w) for w in net.weights]
        self.m_b = [np.zeros_like(b) for b in net.biases]
        self.v_b = [np.zeros_like(b) for b in net.biases]

    def step(self, grads) -> None:
        grads_w, grads_b = grads
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for i in range(len(self.net.weights)):
            for p, g, m, v in (
                (self.net.weights[i], grads_w[i], self.m_w[i], self.v_w[i]),
                (self.net.biases[i], grads_b[i], self.m_b[i], self.v_b[i]),
            ):
                m *= self.beta1
                m += (1 - self.beta1) * g
                v *= self.beta2
                v += (1 - self.beta2) * g * g
                p -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


class ScalarAdam:
    """Adam for a single scalar (the log-temperature)."""

    def __init__(self, lr: float, betas=(0.9, 0.999), eps: float = 1e-8):
        self.lr = lr
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self.m = 0.0
        self.v = 0.0

    def step(self, value: float, grad: float) -> float:
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1**self.t)
        v_hat = self.v / (1 - self.beta2**self.t)
        return value - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
