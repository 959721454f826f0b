"""Direct minimization of the condensed nonsmooth energy.

The discrete solution is the unique minimizer of

    E(u_C) = 1/2 u_C' S u_C - g' u_C + sum_i w_i [ j_nu(u_nu_i) + h_tau |u_tx_i| ]

over the contact DOFs (the interior constant is dropped; it does not move
the argmin).  E is strictly convex since S is SPD and the boundary terms
are convex, so Powell's method converges to the global minimum.

Line minimizations use the restriction trick: along u_C + alpha*d the
quadratic part collapses to three scalars (two mat-vecs per search) and
only the boundary sum is re-evaluated per trial point, in the compiled
kernel when available.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from hemicontact import _kernels
from hemicontact.assembly import contact_traction
from hemicontact.laws import ContactLaw
from hemicontact.problem import DiscreteProblem, SolveResult
from hemicontact.schur import ReducedSystem, recover_interior
from hemicontact.solvers.powell import PowellConfig, powell_minimize

__all__ = ["ReducedObjective", "solve_direct", "powell_config_from"]


class ReducedObjective:
    """Condensed energy handle: pure evaluations plus a fast line search.

    Contact-DOF layout is interleaved [x_0, y_0, x_1, y_1, ...], so the
    normal trace is -u_C[1::2] and the tangential trace u_C[0::2].
    """

    def __init__(self, red: ReducedSystem, law: ContactLaw, weights: np.ndarray,
                 ls_growth: float = 2.0, ls_max_expand: int = 60, ls_tol: float = 1e-10):
        self.S = np.ascontiguousarray(red.S)
        self.g = np.ascontiguousarray(red.g)
        self.law = law
        self.w = np.ascontiguousarray(weights, dtype=float)
        self.ls_growth = ls_growth
        self.ls_max_expand = ls_max_expand
        self.ls_tol = ls_tol
        self.n_evaluations = 0

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def boundary(self, u_C: np.ndarray) -> float:
        return _kernels.boundary_energy(
            self.w, np.ascontiguousarray(-u_C[1::2]), np.ascontiguousarray(u_C[0::2]),
            self.law.q_max, self.law.p_const, self.law.h_tau)

    def __call__(self, u_C: np.ndarray) -> float:
        self.n_evaluations += 1
        u_C = np.asarray(u_C, dtype=float)
        if u_C.shape != (self.dim,):
            raise ValueError(f"expected contact vector of length {self.dim}, got {u_C.shape}")
        quad = 0.5 * (u_C @ (self.S @ u_C)) - self.g @ u_C
        return quad + self.boundary(u_C)

    def line_minimizer(self, x: np.ndarray, d: np.ndarray, step: float):
        """Minimize along x + alpha*d; returns (alpha, value, n_evals)."""
        Sx = self.S @ x
        Sd = self.S @ d
        qa = 0.5 * (d @ Sd)
        qb = d @ Sx - d @ self.g
        qc = 0.5 * (x @ Sx) - self.g @ x
        alpha, f, nev = _kernels.line_search(
            qa, qb, qc, self.w,
            np.ascontiguousarray(-x[1::2]), np.ascontiguousarray(-d[1::2]),
            np.ascontiguousarray(x[0::2]), np.ascontiguousarray(d[0::2]),
            self.law.q_max, self.law.p_const, self.law.h_tau,
            step, self.ls_growth, self.ls_max_expand, self.ls_tol)
        self.n_evaluations += nev
        return alpha, f, nev


def powell_config_from(options: dict) -> PowellConfig:
    """PowellConfig from a raw `opt_*` option mapping."""
    kw = {}
    for key in ("f_tol", "x_tol", "ls_step", "ls_growth", "ls_tol"):
        if key in options:
            kw[key] = float(options[key])
    for key in ("max_cycles", "ls_max_expand", "reset_every"):
        if key in options:
            kw[key] = int(options[key])
    return PowellConfig(**kw)


def solve_direct(problem: DiscreteProblem,
                 config: Optional[PowellConfig] = None,
                 warm_start: Optional[np.ndarray] = None) -> SolveResult:
    """Minimize the condensed energy and recover the interior.

    `warm_start` is a free-DOF vector on the same mesh (typically the
    interpolated solution of the next-coarser mesh); its contact part
    seeds the optimizer.
    """
    t0 = time.perf_counter()
    cfg = config if config is not None else powell_config_from(problem.config.method_options("opt"))
    red = problem.reduced
    objective = ReducedObjective(red, problem.law, problem.geometry.node_weights,
                                 ls_growth=cfg.ls_growth, ls_max_expand=cfg.ls_max_expand,
                                 ls_tol=cfg.ls_tol)
    if warm_start is not None:
        x0 = np.asarray(warm_start, dtype=float)[red.contact_dofs]
    else:
        x0 = np.zeros(objective.dim)

    res = powell_minimize(objective, x0, cfg, line_minimizer=objective.line_minimizer)

    u = recover_interior(red, res.x)
    sys = problem.system
    return SolveResult(
        method="opt",
        u=u,
        converged=res.converged,
        status=res.status,
        iterations=res.cycles,
        n_evaluations=objective.n_evaluations,
        objective=res.f,
        residual_norm=None,
        trace=problem.trace(u),
        tractions=contact_traction(sys.mesh, sys.dof_map, sys.material, u),
        wall_time=time.perf_counter() - t0,
    )
