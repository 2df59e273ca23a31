"""Bundled goal-reaching environments and the name registry the CLI uses."""

from ..core import GoalReachEnv
from .mountain_car import MountainCar
from .point_reacher import PointReacher
from .two_link import TwoLinkReacher
from . import point_reacher, two_link

_FACTORIES = {
    "point_reacher_easy": lambda seed: PointReacher(point_reacher.EASY_RADIUS, seed),
    "point_reacher_hard": lambda seed: PointReacher(point_reacher.HARD_RADIUS, seed),
    "two_link_easy": lambda seed: TwoLinkReacher(two_link.EASY_RADIUS, seed),
    "two_link_hard": lambda seed: TwoLinkReacher(two_link.HARD_RADIUS, seed),
    "mountain_car": lambda seed: MountainCar(seed),
}

ENV_NAMES = tuple(_FACTORIES)


def make_env(name: str, seed: int | None = None) -> GoalReachEnv:
    """Construct a registered environment by name."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(f"unknown environment {name!r}; known: {', '.join(ENV_NAMES)}") from None
    env = factory(seed)
    env.name = name
    return env


__all__ = ["ENV_NAMES", "make_env", "MountainCar", "PointReacher", "TwoLinkReacher"]
