"""Goal-reaching RL workbench.

Contrast three specifications of the same reaching task (dense guiding
reward, sparse contact reward, constant -1 minimum-time reward), treat the
episode time limit as a tunable solution parameter, and predict whether a
minimum-time task is learnable from the initial policy's goal-hit rate.
"""

from .agent import ReplayBuffer, SacAgent, SacConfig, TrainingDiverged
from .config import RunConfig, component_seeds, load_config
from .core import (
    CONTACT,
    FORMULATIONS,
    GUIDING,
    MINTIME,
    EpisodeRecord,
    FormulationSpec,
    GoalReachEnv,
    StepOutcome,
    accumulate_episode,
    contact_reward,
    guiding_reward,
    wrap,
)
from .envs import ENV_NAMES, make_env
from .evaluation import (
    EvalStats,
    InitialGaussianPolicy,
    cross_evaluate,
    evaluate_policy,
    mintime_success_rate,
    write_eval_csv,
    write_learning_curve,
)
from .probe import ProbeReport, learnability_verdict, run_probe, sweep_timeouts
from .training import TrainResult, run_training

__version__ = "0.1.0"

__all__ = [
    "CONTACT",
    "ENV_NAMES",
    "EpisodeRecord",
    "EvalStats",
    "FORMULATIONS",
    "FormulationSpec",
    "GUIDING",
    "GoalReachEnv",
    "InitialGaussianPolicy",
    "MINTIME",
    "ProbeReport",
    "ReplayBuffer",
    "RunConfig",
    "SacAgent",
    "SacConfig",
    "StepOutcome",
    "TrainResult",
    "TrainingDiverged",
    "accumulate_episode",
    "component_seeds",
    "contact_reward",
    "cross_evaluate",
    "evaluate_policy",
    "guiding_reward",
    "learnability_verdict",
    "load_config",
    "make_env",
    "mintime_success_rate",
    "run_probe",
    "run_training",
    "sweep_timeouts",
    "wrap",
    "write_eval_csv",
    "write_learning_curve",
]
