"""MLP forward/backward, Adam, and the finite-difference checker itself."""

import numpy as np
import pytest

from mintime.agent import Mlp, check_gradient, finite_difference_gradient
from mintime.agent.mlp import Adam, ScalarAdam, flatten_grads


def test_forward_shapes_and_relu():
    net = Mlp([3, 8, 2], np.random.default_rng(0))
    x = np.random.default_rng(1).normal(size=(5, 3))
    y, cache = net.forward(x)
    assert y.shape == (5, 2)
    # manual recompute
    h = np.maximum(x @ net.weights[0] + net.biases[0], 0.0)
    np.testing.assert_allclose(y, h @ net.weights[1] + net.biases[1])


def test_final_scale_shrinks_output_layer():
    rng_a = np.random.default_rng(42)
    rng_b = np.random.default_rng(42)
    plain = Mlp([4, 8, 2], rng_a)
    scaled = Mlp([4, 8, 2], rng_b, final_scale=0.01)
    np.testing.assert_allclose(scaled.weights[-1], plain.weights[-1] * 0.01)
    np.testing.assert_allclose(scaled.weights[0], plain.weights[0])


def test_flat_roundtrip():
    net = Mlp([3, 5, 5, 2], np.random.default_rng(2))
    flat = net.get_flat()
    assert flat.shape == (net.n_params,)
    other = Mlp([3, 5, 5, 2], np.random.default_rng(99))
    other.set_flat(flat)
    for w1, w2 in zip(net.weights, other.weights):
        np.testing.assert_array_equal(w1, w2)


def test_backward_matches_finite_differences():
    rng = np.random.default_rng(3)
    net = Mlp([4, 12, 12, 3], rng)
    x = rng.normal(size=(6, 4))
    target = rng.normal(size=(6, 3))

    def loss_at(flat):
        net.set_flat(flat)
        y, _ = net.forward(x)
        return float(np.mean((y - target) ** 2))

    x0 = net.get_flat()
    y, cache = net.forward(x)
    grads, _ = net.backward(cache, 2.0 * (y - target) / y.size)
    report = check_gradient(loss_at, flatten_grads(grads), x0)
    net.set_flat(x0)
    assert report.passed(1e-6), str(report)


def test_backward_input_matches_full_backward():
    rng = np.random.default_rng(4)
    net = Mlp([5, 16, 16, 1], rng)
    x = rng.normal(size=(7, 5))
    y, cache = net.forward(x)
    g = rng.normal(size=y.shape)
    _, grad_in_full = net.backward(cache, g)
    grad_in_only = net.backward_input(cache, g)
    np.testing.assert_allclose(grad_in_only, grad_in_full)


def test_linear_loss_gradient_is_exact():
    # loss linear in the parameters: finite differences agree to machine precision
    rng = np.random.default_rng(5)
    direction = rng.normal(size=7)

    def loss(v):
        return float(direction @ v)

    x0 = rng.normal(size=7)
    numeric = finite_difference_gradient(loss, x0)
    np.testing.assert_allclose(numeric, direction, rtol=1e-9, atol=1e-9)
    report = check_gradient(loss, direction, x0)
    assert report.max_rel_error < 1e-9


def test_adam_reduces_quadratic_loss():
    rng = np.random.default_rng(6)
    net = Mlp([2, 8, 1], rng)
    opt = Adam(net, lr=1e-2)
    x = rng.normal(size=(32, 2))
    target = (x[:, :1] * 1.5 - x[:, 1:] * 0.5)
    losses = []
    for _ in range(400):
        y, cache = net.forward(x)
        err = y - target
        losses.append(float(np.mean(err**2)))
        grads, _ = net.backward(cache, 2.0 * err / err.size)
        opt.step(grads)
    assert losses[-1] < 0.02 * losses[0]


def test_scalar_adam_first_step_size_is_lr():
    opt = ScalarAdam(lr=0.1)
    new = opt.step(1.0, grad=123.0)
    assert new == pytest.approx(1.0 - 0.1, abs=1e-6)
