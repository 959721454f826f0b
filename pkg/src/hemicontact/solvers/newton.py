"""Damped semismooth Newton iteration for piecewise-smooth residuals.

The caller supplies the residual and a per-branch Jacobian selection
(the generalized Jacobian element of the active smooth branch).  Steps
are damped by backtracking on the residual norm; a singular Jacobian is
regularized by a tiny diagonal shift, and sustained residual growth
aborts the iteration with the best iterate seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["NewtonConfig", "NewtonResult", "semismooth_newton"]


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-10           # residual norm target
    max_iter: int = 50
    damping: float = 0.5         # backtracking shrink factor
    max_backtrack: int = 25
    divergence_factor: float = 10.0
    divergence_window: int = 5

    def __post_init__(self):
        if self.tol <= 0 or not 0 < self.damping < 1:
            raise ValueError("tol must be positive and damping in (0, 1)")


@dataclass
class NewtonResult:
    x: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    status: str
    history: list


def semismooth_newton(residual: Callable[[np.ndarray], np.ndarray],
                      jacobian: Callable[[np.ndarray], np.ndarray],
                      x0: np.ndarray,
                      config: NewtonConfig = NewtonConfig()) -> NewtonResult:
    x = np.asarray(x0, dtype=float).copy()
    r = np.atleast_1d(np.asarray(residual(x), dtype=float))
    rnorm = float(np.linalg.norm(r))
    history = [rnorm]
    best_x, best_norm = x.copy(), rnorm

    for it in range(1, config.max_iter + 1):
        if rnorm <= config.tol:
            return NewtonResult(x, rnorm, it - 1, True, "converged", history)

        J = np.atleast_2d(np.asarray(jacobian(x), dtype=float))
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            J = J + 1e-12 * np.eye(J.shape[0])
            step = np.linalg.solve(J, -r)

        t = 1.0
        for _ in range(config.max_backtrack):
            x_try = x + t * step
            r_try = np.atleast_1d(np.asarray(residual(x_try), dtype=float))
            n_try = float(np.linalg.norm(r_try))
            if n_try <= (1.0 - 1e-4 * t) * rnorm:
                break
            t *= config.damping
        x, r, rnorm = x_try, r_try, n_try
        history.append(rnorm)

        if rnorm < best_norm:
            best_x, best_norm = x.copy(), rnorm
        w = config.divergence_window
        if len(history) > w and history[-1] > config.divergence_factor * history[-1 - w]:
            return NewtonResult(best_x, best_norm, it, False, "diverged", history)

    converged = rnorm <= config.tol
    if not converged and best_norm < rnorm:
        x, rnorm = best_x, best_norm
    return NewtonResult(x, rnorm, config.max_iter, converged,
                        "converged" if converged else "max_iter exceeded", history)
