"""Finite-difference verification of the hand-derived gradients.

Central differences at h=1e-5 on float64 give roughly 1e-10 absolute
accuracy on O(1) losses, so a healthy gradient engine shows relative errors
orders of magnitude below the 1e-4 release gate.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class GradCheckReport:
    max_rel_error: float
    worst_index: int
    n_params: int
    analytic_at_worst: float
    numeric_at_worst: float

    def passed(self, tolerance: float) -> bool:
        return self.max_rel_error < tolerance

    def __str__(self):
        return (
            f"max relative error {self.max_rel_error:.3e} at parameter {self.worst_index}"
            f"/{self.n_params} (analytic {self.analytic_at_worst:.6e},"
            f" finite-difference {self.numeric_at_worst:.6e})"
        )


def finite_difference_gradient(loss_fn, x0: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function at x0."""
    x0 = np.asarray(x0, dtype=float)
    grad = np.zeros_like(x0)
    x = x0.copy()
    for i in range(x0.size):
        orig = x[i]
        x[i] = orig + h
        up = loss_fn(x)
        x[i] = orig - h
        down = loss_fn(x)
        x[i] = orig
        grad[i] = (up - down) / (2.0 * h)
    return grad


def check_gradient(loss_fn, analytic_grad: np.ndarray, x0: np.ndarray, h: float = 1e-5) -> GradCheckReport:
    """Compare an analytic gradient against central finite differences.

    The per-entry relative error uses max(|analytic|, |numeric|, 1e-6) as the
    denominator so entries that are legitimately ~0 do not blow up the ratio.
    """
    numeric = finite_difference_gradient(loss_fn, x0, h)
    analytic = np.asarray(analytic_grad, dtype=float)
    if analytic.shape != numeric.shape:
        raise ValueError(f"gradient shapes differ: {analytic.shape} vs {numeric.shape}")
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-6)
    rel = np.abs(analytic - numeric) / denom
    worst = int(np.argmax(rel))
    return GradCheckReport(
        max_rel_error=float(rel[worst]),
        worst_index=worst,
        n_params=int(x0.size),
        analytic_at_worst=float(analytic[worst]),
        numeric_at_worst=float(numeric[worst]),
    )
