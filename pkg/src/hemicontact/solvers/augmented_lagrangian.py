"""Coupled displacement-multiplier formulation of the contact problem.

Unknowns are the displacement plus one multiplier pair per contact node:
lam_nu tracks the contact pressure -sigma_nu and lam_taux the tangential
traction -sigma_taux.  The nonsmooth boundary terms are replaced by their
exact augmented envelopes (laws.l_nu / laws.l_tau), so the stationarity
system

    elastic block:     Ku - F + contact tractions(u, lam) = 0
    multiplier block:  d/dlam of the boundary envelope      = 0

is an exact reformulation of the discrete problem for any penalty
eps > 0 (the penalty only steers the Newton iteration).  The residual is
piecewise affine in (u, lam), so the damped semismooth Newton iteration
settles the branch pattern and then solves exactly.

The solver runs on the condensed system; the elastic block then holds
S u_C - g in place of Ku - F, with identical contact terms.  An outer
loop re-solves on a decreasing penalty schedule until the displacement
stops moving in the energy norm.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from hemicontact import laws
from hemicontact.assembly import contact_traction
from hemicontact.laws import ContactLaw
from hemicontact.problem import DiscreteProblem, SolveResult
from hemicontact.schur import recover_interior
from hemicontact.solvers.newton import NewtonConfig, semismooth_newton

__all__ = ["ALConfig", "MultiplierField", "al_residual", "solve_al",
           "al_config_from", "prolong_multipliers"]


@dataclass(frozen=True)
class ALConfig:
    eps_init: float = 1.0
    eps_factor: float = 0.5      # multiplicative update per outer iteration
    eps_min: float = 1e-4
    eps_max: float = 1e8
    outer_max: int = 20
    outer_tol: float = 1e-8      # energy-norm Cauchy tolerance
    newton: NewtonConfig = field(default_factory=NewtonConfig)

    def __post_init__(self):
        if self.eps_init <= 0 or self.eps_factor <= 0:
            raise ValueError("penalty parameters must be positive")
        if self.outer_tol <= 0:
            raise ValueError("outer_tol must be positive")


@dataclass
class MultiplierField:
    """Per-contact-node multipliers; lam_tau embeds the tangential scalar
    as (lam_taux, 0) to keep the zero normal component explicit."""

    lam_nu: np.ndarray
    lam_taux: np.ndarray

    @property
    def lam_tau(self) -> np.ndarray:
        out = np.zeros((self.lam_taux.shape[0], 2))
        out[:, 0] = self.lam_taux
        return out

    @classmethod
    def zeros(cls, n_c: int) -> "MultiplierField":
        return cls(lam_nu=np.zeros(n_c), lam_taux=np.zeros(n_c))


def al_config_from(options: dict) -> ALConfig:
    kw = {}
    for key in ("eps_init", "eps_factor", "eps_min", "eps_max", "outer_tol"):
        if key in options:
            kw[key] = float(options[key])
    if "outer_max" in options:
        kw["outer_max"] = int(options["outer_max"])
    nkw = {}
    if "newton_tol" in options:
        nkw["tol"] = float(options["newton_tol"])
    if "newton_max" in options:
        nkw["max_iter"] = int(options["newton_max"])
    if "damping" in options:
        nkw["damping"] = float(options["damping"])
    if nkw:
        kw["newton"] = NewtonConfig(**nkw)
    return ALConfig(**kw)


def _contact_contributions(law: ContactLaw, weights, u_nu, u_tx, lam_nu, lam_tx,
                           eps_nu, eps_tau):
    """Per-node residual pieces: (force_x, force_y, r_lam_nu, r_lam_tau).

    force_* are the boundary traction terms entering the elastic block
    (chain rule u_nu = -u_y gives the y sign flip); r_lam_* are the
    multiplier equations.
    """
    n = weights.shape[0]
    fx = np.empty(n)
    fy = np.empty(n)
    rln = np.empty(n)
    rlt = np.empty(n)
    for i in range(n):
        gnu_u, gnu_l = laws.grad_l_nu(u_nu[i], lam_nu[i], eps_nu, law)
        gta_u, gta_l = laws.grad_l_tau_1d(u_tx[i], lam_tx[i], eps_tau, law)
        w = weights[i]
        fy[i] = -w * (gnu_u + laws.p_smooth(u_nu[i], law.p_const))
        fx[i] = w * gta_u
        rln[i] = w * gnu_l
        rlt[i] = w * gta_l
    return fx, fy, rln, rlt


def al_residual(problem: DiscreteProblem, u: np.ndarray, mult: MultiplierField,
                eps_nu: float, eps_tau: float) -> np.ndarray:
    """Stacked residual on the full free-DOF system, length 2*n_tot + 2*n_C.

    Elastic block Ku - F plus the boundary traction terms at the contact
    DOFs; multiplier block interleaved [r_lam_nu_i, r_lam_tau_i].
    """
    dm = problem.dof_map
    u = np.asarray(u, dtype=float)
    if u.shape != (dm.n_dofs,):
        raise ValueError(f"expected displacement of length {dm.n_dofs}, got {u.shape}")
    trace = problem.trace(u)
    fx, fy, rln, rlt = _contact_contributions(
        problem.law, problem.geometry.node_weights,
        trace[:, 0], trace[:, 1], mult.lam_nu, mult.lam_taux, eps_nu, eps_tau)

    r_u = problem.system.K @ u - problem.system.F
    r_u[dm.contact_xdofs] += fx
    r_u[dm.contact_ydofs] += fy
    r_m = np.empty(2 * dm.n_c)
    r_m[0::2] = rln
    r_m[1::2] = rlt
    return np.concatenate([r_u, r_m])


class _ReducedALSystem:
    """Residual and branch Jacobian on (u_C, multipliers)."""

    def __init__(self, problem: DiscreteProblem, eps_nu: float, eps_tau: float):
        self.red = problem.reduced
        self.law = problem.law
        self.w = problem.geometry.node_weights
        self.n_c = self.w.shape[0]
        self.eps_nu = eps_nu
        self.eps_tau = eps_tau

    def split(self, z: np.ndarray):
        m = 2 * self.n_c
        u_C, lam = z[:m], z[m:]
        return u_C, lam[0::2], lam[1::2]

    def residual(self, z: np.ndarray) -> np.ndarray:
        u_C, lam_nu, lam_tx = self.split(z)
        u_nu, u_tx = -u_C[1::2], u_C[0::2]
        fx, fy, rln, rlt = _contact_contributions(
            self.law, self.w, u_nu, u_tx, lam_nu, lam_tx, self.eps_nu, self.eps_tau)
        r_u = self.red.S @ u_C - self.red.g
        r_u[0::2] += fx
        r_u[1::2] += fy
        r_m = np.empty(2 * self.n_c)
        r_m[0::2] = rln
        r_m[1::2] = rlt
        return np.concatenate([r_u, r_m])

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        u_C, lam_nu, lam_tx = self.split(z)
        u_nu, u_tx = -u_C[1::2], u_C[0::2]
        m = 2 * self.n_c
        J = np.zeros((2 * m, 2 * m))
        J[:m, :m] = self.red.S
        law = self.law
        for i in range(self.n_c):
            w = self.w[i]
            xd, yd = 2 * i, 2 * i + 1
            ln, lt = m + 2 * i, m + 2 * i + 1
            huu, hul, hll = laws.hess_l_nu(u_nu[i], lam_nu[i], self.eps_nu, law)
            # y-block: residual -w*(g_nu(u_nu) + p), u_nu = -u_y
            J[yd, yd] += w * (huu + laws.dp_smooth(u_nu[i], law.p_const))
            J[yd, ln] = -w * hul
            J[ln, yd] = -w * hul
            J[ln, ln] = w * hll
            tuu, tul, tll = laws.hess_l_tau_1d(u_tx[i], lam_tx[i], self.eps_tau, law)
            J[xd, xd] += w * tuu
            J[xd, lt] = w * tul
            J[lt, xd] = w * tul
            J[lt, lt] = w * tll
        return J


def prolong_multipliers(mult: MultiplierField, n_c_fine: int) -> MultiplierField:
    """Linear interpolation of multipliers onto a refined contact boundary.

    Contact node k sits at x = k*h for k = 1..n_c; the clamped corner at
    x = 0 contributes a zero pad for the first interpolated value.
    """
    n_c = mult.lam_nu.shape[0]
    if n_c_fine != 2 * n_c:
        raise ValueError(f"multiplier refinement must double the nodes: {n_c} -> {n_c_fine}")

    def interp(vals):
        padded = np.concatenate([[0.0], vals])
        out = np.empty(n_c_fine)
        out[1::2] = vals                                  # even fine nodes copy
        out[0::2] = 0.5 * (padded[:-1] + padded[1:])      # odd nodes average
        return out

    return MultiplierField(lam_nu=interp(mult.lam_nu), lam_taux=interp(mult.lam_taux))


def solve_al(problem: DiscreteProblem,
             config: Optional[ALConfig] = None,
             warm_start: Optional[np.ndarray] = None,
             warm_multipliers: Optional[MultiplierField] = None) -> SolveResult:
    """Outer penalty loop around the semismooth Newton inner solver.

    Terminates when consecutive outer displacements differ by less than
    `outer_tol` in the energy norm (the exact-envelope system already
    solves exactly at the first penalty value, so the loop normally runs
    twice).
    """
    t0 = time.perf_counter()
    cfg = config if config is not None else al_config_from(problem.config.method_options("al"))
    red = problem.reduced
    n_c = problem.dof_map.n_c

    if warm_start is not None:
        u_C = np.asarray(warm_start, dtype=float)[red.contact_dofs].copy()
    else:
        u_C = np.zeros(2 * n_c)
    mult = warm_multipliers if warm_multipliers is not None else MultiplierField.zeros(n_c)
    z = np.concatenate([u_C, np.stack([mult.lam_nu, mult.lam_taux], axis=1).ravel()])

    eps = min(max(cfg.eps_init, cfg.eps_min), cfg.eps_max)
    history = []
    u_prev = None
    status = "outer_max exceeded"
    converged = False
    newton_res = None
    outer = 0
    for outer in range(1, cfg.outer_max + 1):
        sys_eps = _ReducedALSystem(problem, eps, eps)
        newton_res = semismooth_newton(sys_eps.residual, sys_eps.jacobian, z, cfg.newton)
        z = newton_res.x
        u_C = z[:2 * n_c]
        u = recover_interior(red, u_C)
        history.append({
            "eps": eps,
            "newton_iterations": newton_res.iterations,
            "residual_norm": newton_res.residual_norm,
        })
        if not newton_res.converged:
            status = f"inner solver failed: {newton_res.status}"
            break
        if u_prev is not None:
            if problem.v_norm(u - u_prev) < cfg.outer_tol:
                converged = True
                status = "outer iterates Cauchy"
                break
        u_prev = u
        new_eps = eps * cfg.eps_factor
        if not (cfg.eps_min <= new_eps <= cfg.eps_max):
            converged = newton_res.converged
            status = "penalty schedule exhausted"
            break
        eps = new_eps

    u_C = z[:2 * n_c]
    lam = z[2 * n_c:]
    mult = MultiplierField(lam_nu=lam[0::2].copy(), lam_taux=lam[1::2].copy())
    u = recover_interior(red, u_C)
    sys = problem.system
    return SolveResult(
        method="al",
        u=u,
        converged=converged,
        status=status,
        iterations=outer,
        n_evaluations=sum(h["newton_iterations"] for h in history),
        objective=None,
        residual_norm=newton_res.residual_norm if newton_res else None,
        trace=problem.trace(u),
        tractions=contact_traction(sys.mesh, sys.dof_map, sys.material, u),
        multipliers=(mult.lam_nu, mult.lam_taux),
        history=history,
        wall_time=time.perf_counter() - t0,
    )
