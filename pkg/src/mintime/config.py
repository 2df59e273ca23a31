"""Run configuration: defaults, flat key=value files, and seed derivation.

A run is fully described by a small set of scalar settings; the echo file a
training run writes is exactly this mapping, one ``key=value`` per line, and
feeding it back reproduces the run bit-for-bit.  Precedence when assembling
a config: command-line flags > config file > defaults.
"""

from dataclasses import dataclass, fields, replace

import numpy as np

from .agent import SacConfig
from .core import FORMULATIONS, MINTIME, FormulationSpec
from .envs import ENV_NAMES


def _parse_bool(s):
    if s in ("true", "True", "1"):
        return True
    if s in ("false", "False", "0"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_int_tuple(s):
    return tuple(int(p) for p in str(s).split(",") if p.strip())


def _parse_float_tuple(s):
    return tuple(float(p) for p in str(s).split(",") if p.strip())


def _parse_opt_float(s):
    return None if s == "auto" else float(s)


def _fmt_tuple(v):
    return ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)


# name -> (parse from string, format to string)
_FIELD_CODECS = {
    "env": (str, str),
    "formulation": (str, str),
    "timeout": (int, str),
    "reset_penalty": (float, repr),
    "episode_length": (int, str),
    "steps": (int, str),
    "seed": (int, str),
    "buffer_capacity": (int, str),
    "actor_lr": (float, repr),
    "critic_lr": (float, repr),
    "temp_lr": (float, repr),
    "batch_size": (int, str),
    "gamma": (float, repr),
    "update_every_k": (int, str),
    "epochs_per_update": (int, str),
    "warmup_steps": (int, str),
    "adam_betas": (_parse_float_tuple, _fmt_tuple),
    "init_temperature": (float, repr),
    "hidden_sizes": (_parse_int_tuple, _fmt_tuple),
    "target_smoothing_tau": (float, repr),
    "target_entropy": (_parse_opt_float, lambda v: "auto" if v is None else repr(v)),
    "dtype": (str, str),
}

_AGENT_FIELDS = (
    "buffer_capacity",
    "actor_lr",
    "critic_lr",
    "temp_lr",
    "batch_size",
    "gamma",
    "update_every_k",
    "epochs_per_update",
    "warmup_steps",
    "adam_betas",
    "init_temperature",
    "hidden_sizes",
    "target_smoothing_tau",
    "target_entropy",
    "dtype",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a training run's trajectory.

    Environment/formulation settings follow the task-formulation table
    defaults (fixed length 1000); agent settings default to the published
    hyper-parameter table via :class:`SacConfig`.
    """

    env: str = "point_reacher_easy"
    formulation: str = MINTIME
    timeout: int = 100
    reset_penalty: float = 0.0
    episode_length: int = 1000
    steps: int = 100_000
    seed: int = 0
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
    target_smoothing_tau: float = 0.005
    target_entropy: float | None = None
    dtype: str = "float64"

    def __post_init__(self):
        if self.env not in ENV_NAMES:
            raise ValueError(f"unknown environment {self.env!r}; known: {', '.join(ENV_NAMES)}")
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"unknown formulation {self.formulation!r}; expected one of {FORMULATIONS}")
        if self.steps < 1:
            raise ValueError("steps must be positive")
        self.agent_config()  # validates agent fields
        self.formulation_spec()  # validates formulation fields

    def agent_config(self) -> SacConfig:
        return SacConfig(**{name: getattr(self, name) for name in _AGENT_FIELDS})

    def formulation_spec(self) -> FormulationSpec:
        return FormulationSpec(
            kind=self.formulation,
            episode_length_T=self.episode_length,
            timeout=self.timeout,
            reset_penalty_K=self.reset_penalty,
        )

    def with_overrides(self, **overrides) -> "RunConfig":
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return replace(self, **overrides)

    def to_file(self, path) -> None:
        with open(path, "w") as fh:
            for name, (_, fmt) in _FIELD_CODECS.items():
                fh.write(f"{name}={fmt(getattr(self, name))}\n")


def parse_config_file(path) -> dict:
    """Read a flat key=value file; unknown keys are rejected."""
    overrides = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in _FIELD_CODECS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            parse, _ = _FIELD_CODECS[key]
            overrides[key] = parse(raw.strip())
    return overrides


def load_config(path) -> RunConfig:
    return RunConfig().with_overrides(**parse_config_file(path))


# Component order for master-seed splitting; see component_seeds.
SEED_COMPONENTS = ("env", "agent", "eval", "probe")


def component_seeds(master_seed: int) -> dict[str, int]:
    """Derive per-component seeds from one master seed.

    The master seed feeds ``numpy.random.SeedSequence`` whose spawned
    children map, in order, to the components in :data:`SEED_COMPONENTS`;
    each child collapses to a 32-bit integer.  The derivation is stable
    across runs and platforms, so any single component can be reproduced
    without replaying the others.
    """
    children = np.random.SeedSequence(master_seed).spawn(len(SEED_COMPONENTS))
    return {name: int(child.generate_state(1)[0]) for name, child in zip(SEED_COMPONENTS, children)}
