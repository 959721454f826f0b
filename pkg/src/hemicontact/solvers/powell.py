"""Powell's conjugate-direction method, derivative-free.

Suited to the condensed contact energy, which is convex and coercive but
not differentiable.  Each cycle runs a line minimization along every
member of a direction set, then (under the standard acceptance test)
replaces the direction of largest decrease with the net cycle
displacement.  Line minimizations bracket by geometric expansion and
refine by golden section, which needs no smoothness.

The direction set is reset to the coordinate basis every `reset_every`
cycles (default 2*dim) to guard against linear dependence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from hemicontact._kernels import _fallback

__all__ = ["PowellConfig", "PowellResult", "powell_minimize", "bracket_golden"]


@dataclass(frozen=True)
class PowellConfig:
    f_tol: float = 1e-10        # stop when cycle decrease < f_tol*(|f|+f_tol)
    x_tol: float = 1e-9         # stop when max cycle displacement < x_tol
    max_cycles: int = 200
    ls_step: float = 1.0        # initial bracketing step
    ls_growth: float = 2.0
    ls_max_expand: int = 60
    ls_tol: float = 1e-10       # golden-section interval tolerance
    reset_every: int = 0        # 0 = 2*dim

    def __post_init__(self):
        for name in ("f_tol", "x_tol", "ls_step", "ls_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.ls_growth <= 1:
            raise ValueError("ls_growth must exceed 1")


@dataclass
class PowellResult:
    x: np.ndarray
    f: float
    cycles: int
    n_evaluations: int
    converged: bool
    status: str


def bracket_golden(phi: Callable[[float], float], step: float, growth: float,
                   max_expand: int, tol: float):
    """Line minimization of a 1D function; returns (alpha, value, n_evals).

    Same algorithm as the compiled kernel; used for objectives that have
    no cheap line restriction.
    """
    return _fallback.minimize_scalar(phi, step, growth, max_expand, tol)


def powell_minimize(objective: Callable[[np.ndarray], float], x0: np.ndarray,
                    config: PowellConfig = PowellConfig(),
                    line_minimizer: Optional[Callable] = None) -> PowellResult:
    """Minimize `objective` from `x0`.

    `line_minimizer(x, d, step) -> (alpha, f_new, n_evals)`, when given,
    replaces the generic line search (the condensed objective supplies a
    restricted evaluation that avoids full re-evaluations).
    """
    x = np.asarray(x0, dtype=float).copy()
    dim = x.size
    reset_every = config.reset_every or 2 * dim
    nev = 0

    def line_min(xc, d, step):
        nonlocal nev
        if line_minimizer is not None:
            alpha, f_new, k = line_minimizer(xc, d, step)
        else:
            alpha, f_new, k = bracket_golden(
                lambda a: objective(xc + a * d),
                step, config.ls_growth, config.ls_max_expand, config.ls_tol)
        nev += k
        return alpha, f_new

    f = objective(x)
    nev += 1
    dirs = np.eye(dim)
    last_step = np.full(dim, config.ls_step)

    converged = False
    status = "max_cycles exceeded"
    cycle = 0
    fresh_set = True
    cycles_since_reset = 0
    for cycle in range(1, config.max_cycles + 1):
        if cycles_since_reset >= reset_every:
            dirs = np.eye(dim)
            last_step[:] = config.ls_step
            cycles_since_reset = 0
        fresh_set = cycles_since_reset == 0
        cycles_since_reset += 1

        x_start, f_start = x.copy(), f
        biggest_drop, drop_idx = 0.0, 0
        for i in range(dim):
            alpha, f_new = line_min(x, dirs[i], last_step[i])
            if alpha != 0.0:
                x = x + alpha * dirs[i]
                last_step[i] = min(max(2.0 * abs(alpha), 1e-8), config.ls_step)
            if f - f_new > biggest_drop:
                biggest_drop, drop_idx = f - f_new, i
            f = f_new

        decrease = f_start - f
        displacement = float(np.max(np.abs(x - x_start))) if dim else 0.0
        if decrease < config.f_tol * (abs(f_start) + config.f_tol) or displacement < config.x_tol:
            # accept convergence only off a fresh coordinate set; conjugate
            # sets can go stale and leave descent along dropped coordinates
            if fresh_set:
                converged = True
                status = ("objective decrease below tolerance"
                          if decrease < config.f_tol * (abs(f_start) + config.f_tol)
                          else "step size below tolerance")
                break
            dirs = np.eye(dim)
            last_step[:] = config.ls_step
            cycles_since_reset = 0
            continue

        # direction replacement test on the extrapolated point
        d_net = x - x_start
        norm_net = float(np.linalg.norm(d_net))
        if norm_net == 0.0:
            continue
        f_ext = objective(x + d_net)
        nev += 1
        if f_ext < f_start:
            t = (2.0 * (f_start - 2.0 * f + f_ext) * (f_start - f - biggest_drop) ** 2
                 - biggest_drop * (f_start - f_ext) ** 2)
            if t < 0.0:
                d_unit = d_net / norm_net
                alpha, f_new = line_min(x, d_unit, norm_net)
                if alpha != 0.0:
                    x = x + alpha * d_unit
                f = f_new
                dirs[drop_idx] = dirs[dim - 1]
                dirs[dim - 1] = d_unit

    return PowellResult(x=x, f=f, cycles=cycle, n_evaluations=nev,
                        converged=converged, status=status)
