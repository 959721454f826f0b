"""Primal-dual active set strategy on the condensed contact system.

Every contact node carries a normal state and a tangential state:

    N1  separated:      no normal traction           (sigma_nu = 0)
    N2  rigid contact:  u_nu = 0,  pressure in [0, q_max]
    N3  flexible:       pressure = p_const*u_nu + q_max  (Robin term)
    T1  stick:          u_taux = 0, |traction| <= h_tau
    T2  slip:           traction = h_tau against the frozen slip direction

Each assignment turns the problem into a linear solve (Dirichlet rows for
N2/T1, a diagonal Robin term for N3, load terms for N3/T2); nodes are then
reassigned by threshold rules that move only between adjacent branches of
the normal law.  Pressures are measured as pi = -sigma_nu (nonnegative in
contact).

Classification quantities: constrained states (N2, T1) are judged by the
discrete reaction extracted from the condensed residual, which is exact
for the linear subproblem; this matches the other two solvers'
optimality conditions.  Slip persistence (T2) is judged by the primal
slip indicator u_taux * direction > 0: a slipping node keeps sliding
along its frozen direction, while a node wrongly released will move
against the imposed friction load and re-stick.  The stress-threshold
rule ||sigma_tau|| >= h_tau + eps applied to recovered stresses is
available as `t2_rule="stress"`, but since the imposed slip traction
sits exactly at the bound it re-sticks converged slip nodes whenever the
recovery error falls below eps, which cycles.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from hemicontact.assembly import contact_traction
from hemicontact.laws import ContactLaw
from hemicontact.problem import DiscreteProblem, SolveResult
from hemicontact.schur import ReducedSystem, recover_interior

__all__ = ["ActiveSets", "PdasConfig", "solve_subproblem", "classify",
           "solve_pdas", "pdas_config_from"]

N1, N2, N3 = 1, 2, 3
T1, T2 = 1, 2

_NORMAL_LABELS = {N1: "N1", N2: "N2", N3: "N3"}
_TANGENTIAL_LABELS = {T1: "T1", T2: "T2"}


@dataclass
class ActiveSets:
    """Exhaustive, exclusive state assignment of the contact nodes."""

    normal: np.ndarray      # int8, values N1/N2/N3
    tangential: np.ndarray  # int8, values T1/T2
    slip_dir: np.ndarray    # frozen slip direction (x component), used by T2

    @classmethod
    def initial(cls, n_c: int) -> "ActiveSets":
        return cls(normal=np.full(n_c, N1, dtype=np.int8),
                   tangential=np.full(n_c, T1, dtype=np.int8),
                   slip_dir=np.zeros(n_c))

    def copy(self) -> "ActiveSets":
        return ActiveSets(self.normal.copy(), self.tangential.copy(), self.slip_dir.copy())

    def signature(self) -> bytes:
        return (self.normal.tobytes() + self.tangential.tobytes()
                + np.sign(self.slip_dir).astype(np.int8).tobytes())

    def __eq__(self, other) -> bool:
        return (isinstance(other, ActiveSets)
                and np.array_equal(self.normal, other.normal)
                and np.array_equal(self.tangential, other.tangential)
                and np.array_equal(np.sign(self.slip_dir), np.sign(other.slip_dir)))

    def normal_labels(self) -> list[str]:
        return [_NORMAL_LABELS[int(s)] for s in self.normal]

    def tangential_labels(self) -> list[str]:
        return [_TANGENTIAL_LABELS[int(s)] for s in self.tangential]


@dataclass(frozen=True)
class PdasConfig:
    eps_stab: float = 1e-8     # stability offset in the transition rules
    max_outer: int = 60
    cycle_window: int = 6
    t2_rule: str = "slip"      # or "stress" (recovered-stress threshold)

    def __post_init__(self):
        if self.eps_stab <= 0:
            raise ValueError("eps_stab must be positive")
        if self.t2_rule not in ("slip", "stress"):
            raise ValueError(f"unknown t2_rule {self.t2_rule!r}")


def pdas_config_from(options: dict) -> PdasConfig:
    kw = {}
    if "eps_stab" in options:
        kw["eps_stab"] = float(options["eps_stab"])
    if "max_outer" in options:
        kw["max_outer"] = int(options["max_outer"])
    if "cycle_window" in options:
        kw["cycle_window"] = int(options["cycle_window"])
    if "t2_rule" in options:
        kw["t2_rule"] = str(options["t2_rule"])
    return PdasConfig(**kw)


def solve_subproblem(red: ReducedSystem, weights: np.ndarray, law: ContactLaw,
                     sets: ActiveSets):
    """Linear solve under the given state assignment.

    Returns (u_C, reactions) where reactions holds per node the condensed
    residual pair ((S u - g)_x / w, (S u - g)_y / w); the y entry is the
    pressure carried by an N2 constraint, the x entry the stick traction
    sigma_taux demanded by a T1 constraint.
    """
    n_c = weights.shape[0]
    M = red.S.copy()
    rhs = red.g.copy()
    pinned = []
    for i in range(n_c):
        xd, yd = 2 * i, 2 * i + 1
        w = weights[i]
        if sets.normal[i] == N2:
            pinned.append(yd)
        elif sets.normal[i] == N3:
            M[yd, yd] += w * law.p_const
            rhs[yd] += w * law.q_max
        if sets.tangential[i] == T1:
            pinned.append(xd)
        else:
            rhs[xd] -= w * law.h_tau * sets.slip_dir[i]
    for dof in pinned:
        M[dof, :] = 0.0
        M[:, dof] = 0.0
        M[dof, dof] = 1.0
        rhs[dof] = 0.0

    u_C = np.linalg.solve(M, rhs)
    resid = red.S @ u_C - red.g
    reactions = np.column_stack([resid[0::2] / weights, resid[1::2] / weights])
    return u_C, reactions


def classify(trace: np.ndarray, reactions: np.ndarray, tractions: np.ndarray,
             prev: ActiveSets, law: ContactLaw, eps: float,
             t2_rule: str = "slip") -> ActiveSets:
    """Apply the transition rules to produce the next state assignment.

    `trace` holds (u_nu, u_taux); `reactions` the condensed reaction pairs
    from `solve_subproblem`; `tractions` the element-recovered
    (sigma_nu, sigma_taux), used by the stress-threshold variant.
    Normal transitions stay between adjacent branches (N1<->N2<->N3).
    """
    n_c = trace.shape[0]
    out = prev.copy()
    for i in range(n_c):
        u_nu, u_tx = trace[i]
        state = prev.normal[i]
        if state == N1:
            out.normal[i] = N1 if u_nu < -eps else N2
        elif state == N2:
            pi = reactions[i, 1]
            if pi < -eps:
                out.normal[i] = N1
            elif pi < law.q_max + eps:
                out.normal[i] = N2
            else:
                out.normal[i] = N3
        else:  # N3
            out.normal[i] = N2 if u_nu < -eps else N3

        if prev.tangential[i] == T1:
            demand = reactions[i, 0]  # sigma_taux held by the constraint
            if abs(demand) < law.h_tau + eps:
                out.tangential[i] = T1
            else:
                out.tangential[i] = T2
                out.slip_dir[i] = -np.sign(demand) if demand != 0.0 else prev.slip_dir[i]
        else:  # T2
            if t2_rule == "slip":
                slipping = u_tx * prev.slip_dir[i] > eps
            else:
                slipping = abs(tractions[i, 1]) >= law.h_tau + eps
            if slipping:
                out.tangential[i] = T2
                if abs(tractions[i, 1]) > eps:
                    out.slip_dir[i] = -np.sign(tractions[i, 1])
            else:
                out.tangential[i] = T1
                out.slip_dir[i] = 0.0
    return out


def _violation(trace, reactions, sets: ActiveSets, law: ContactLaw, eps: float) -> float:
    """Aggregate constraint violation of an iterate, for cycle resolution."""
    total = 0.0
    for i in range(trace.shape[0]):
        u_nu = trace[i, 0]
        if sets.normal[i] == N1:
            total += max(0.0, u_nu)
        elif sets.normal[i] == N2:
            pi = reactions[i, 1]
            total += max(0.0, pi - law.q_max - eps) + max(0.0, -pi - eps)
        else:
            total += max(0.0, -u_nu)
        if sets.tangential[i] == T1:
            total += max(0.0, abs(reactions[i, 0]) - law.h_tau - eps)
        else:
            total += max(0.0, -trace[i, 1] * sets.slip_dir[i])
    return total


def solve_pdas(problem: DiscreteProblem,
               config: Optional[PdasConfig] = None,
               warm_start: Optional[np.ndarray] = None) -> SolveResult:
    """Iterate linear subproblem + reclassification until the sets repeat.

    All nodes start separated and stuck (N1, T1); a warm-start
    displacement, when given, seeds the sets with one classification pass
    before the first solve.
    """
    t0 = time.perf_counter()
    cfg = config if config is not None else pdas_config_from(problem.config.method_options("pdas"))
    red = problem.reduced
    sysm = problem.system
    weights = problem.geometry.node_weights
    law = problem.law
    n_c = problem.dof_map.n_c

    sets = ActiveSets.initial(n_c)
    if warm_start is not None:
        u_w = np.asarray(warm_start, dtype=float)
        u_C = u_w[red.contact_dofs]
        resid = red.S @ u_C - red.g
        reactions = np.column_stack([resid[0::2] / weights, resid[1::2] / weights])
        tr = contact_traction(sysm.mesh, sysm.dof_map, sysm.material, u_w)
        sets = classify(problem.trace(u_w), reactions, tr, sets, law,
                        cfg.eps_stab, cfg.t2_rule)

    seen: list[bytes] = []
    best = None
    converged = False
    status = "max_outer exceeded"
    u_C = np.zeros(2 * n_c)
    trace = np.zeros((n_c, 2))
    tractions = np.zeros((n_c, 2))
    it = 0
    for it in range(1, cfg.max_outer + 1):
        u_C, reactions = solve_subproblem(red, weights, law, sets)
        u = recover_interior(red, u_C)
        trace = problem.trace(u)
        tractions = contact_traction(sysm.mesh, sysm.dof_map, sysm.material, u)

        new_sets = classify(trace, reactions, tractions, sets, law,
                            cfg.eps_stab, cfg.t2_rule)
        score = _violation(trace, reactions, new_sets, law, cfg.eps_stab)
        if best is None or score < best[0]:
            best = (score, u_C.copy(), sets.copy())

        if new_sets == sets:
            converged = True
            status = "sets stationary"
            break
        sig = new_sets.signature()
        if sig in seen[-cfg.cycle_window:]:
            status = "cycled"
            _, u_C, sets = best
            u = recover_interior(red, u_C)
            trace = problem.trace(u)
            tractions = contact_traction(sysm.mesh, sysm.dof_map, sysm.material, u)
            break
        seen.append(sets.signature())
        sets = new_sets

    u = recover_interior(red, u_C)
    return SolveResult(
        method="pdas",
        u=u,
        converged=converged,
        status=status,
        iterations=it,
        n_evaluations=it,
        objective=None,
        residual_norm=None,
        trace=trace,
        tractions=tractions,
        sets=sets,
        wall_time=time.perf_counter() - t0,
    )
