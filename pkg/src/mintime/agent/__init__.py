from .gradcheck import GradCheckReport, check_gradient, finite_difference_gradient
from .mlp import Adam, Mlp, ScalarAdam, flatten_grads
from .policy import SquashedGaussianPolicy
from .replay import ReplayBuffer
from .sac import SacAgent, SacConfig, TrainingDiverged, soft_backup

__all__ = [
    "Adam",
    "GradCheckReport",
    "Mlp",
    "ReplayBuffer",
    "SacAgent",
    "SacConfig",
    "ScalarAdam",
    "SquashedGaussianPolicy",
    "TrainingDiverged",
    "check_gradient",
    "finite_difference_gradient",
    "flatten_grads",
    "soft_backup",
]
