"""Replay buffer FIFO semantics."""

import numpy as np
import pytest

from mintime.agent import ReplayBuffer, SacConfig


def _fill(buf, n, start=0):
    for i in range(start, start + n):
        buf.push(np.full(3, i), np.full(2, i), float(i), np.full(3, i + 0.5), 1.0)


def test_default_capacity_matches_agent_config():
    assert SacConfig().buffer_capacity == 100_000


def test_size_tracks_pushes_up_to_capacity():
    buf = ReplayBuffer(10, 3, 2)
    assert len(buf) == 0
    _fill(buf, 4)
    assert len(buf) == 4
    _fill(buf, 20, start=4)
    assert len(buf) == 10


def test_fifo_overwrite_drops_oldest():
    capacity = 50
    buf = ReplayBuffer(capacity, 3, 2)
    _fill(buf, capacity + 5)
    stored = set(buf.rewards.astype(int))
    for old in range(5):
        assert old not in stored
    for recent in range(5, capacity + 5):
        assert recent in stored


def test_sample_is_seeded_and_shaped():
    buf = ReplayBuffer(100, 3, 2)
    _fill(buf, 60)
    a = buf.sample(16, np.random.default_rng(9))
    b = buf.sample(16, np.random.default_rng(9))
    np.testing.assert_array_equal(a["obs"], b["obs"])
    assert a["obs"].shape == (16, 3)
    assert a["actions"].shape == (16, 2)
    assert a["rewards"].shape == (16,)
    assert a["continuation"].shape == (16,)


def test_sample_empty_buffer_rejected():
    buf = ReplayBuffer(10, 3, 2)
    with pytest.raises(ValueError):
        buf.sample(4, np.random.default_rng(0))
