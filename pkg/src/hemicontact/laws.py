"""Nonsmooth contact-boundary laws and their regularizations.

Normal law (response of the foundation to penetration u_nu = -u_y):

    j_nu(s) = 0                           s < 0   (separation)
            = p_const/2 s^2 + q_max s     s >= 0  (contact)

so the contact pressure pi = -sigma_nu lies in the subdifferential
p(s) + dq(s) with p(s) = p_const * max(s, 0) and dq the maximal monotone
graph {0} / [0, q_max] / {q_max}.  Tangential law: Tresca friction with
bound h_tau, potential h_tau * ||u_tau||.

For the multiplier formulation the nonsmooth parts are replaced by their
exact augmented envelopes

    l(u, lam) = min_z [ phi(z) + lam (u - z) + eps/2 (u - z)^2 ],

which are C^1 in (u, lam), coincide with phi at stationary multipliers,
and make the coupled system an exact reformulation for any eps > 0.
Multiplier conventions: lam_nu tracks the contact pressure -sigma_nu >= 0,
lam_tau tracks the friction traction -sigma_tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hemicontact import _kernels

__all__ = [
    "ContactLaw",
    "SubgradientInterval",
    "UnitBall",
    "j_nu",
    "d_j_nu",
    "j0_nu",
    "j_tau",
    "d_j_tau",
    "j0_tau",
    "J_boundary",
    "l_nu",
    "grad_l_nu",
    "hess_l_nu",
    "l_tau",
    "grad_l_tau",
    "l_tau_1d",
    "grad_l_tau_1d",
    "hess_l_tau_1d",
    "p_smooth",
    "dp_smooth",
]


@dataclass(frozen=True)
class ContactLaw:
    """Foundation parameters: pressure threshold, post-threshold stiffness,
    friction bound.  All nonnegative, which keeps the boundary potential
    convex and the discrete energy strictly convex for any eta > 0."""

    q_max: float
    p_const: float
    h_tau: float

    def __post_init__(self):
        for name in ("q_max", "p_const", "h_tau"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class SubgradientInterval:
    """Closed interval [lo, hi] of admissible normal subgradients."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, g: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= g <= self.hi + tol


@dataclass(frozen=True)
class UnitBall:
    """Closed ball {g : ||g|| <= radius}, the tangential subdifferential at 0."""

    radius: float = 1.0


# -- normal law ---------------------------------------------------------

def j_nu(xi: float, law: ContactLaw) -> float:
    if xi < 0.0:
        return 0.0
    return (0.5 * law.p_const * xi + law.q_max) * xi


def d_j_nu(xi: float, law: ContactLaw) -> SubgradientInterval:
    if xi < 0.0:
        return SubgradientInterval(0.0, 0.0)
    if xi == 0.0:
        return SubgradientInterval(0.0, law.q_max)
    g = law.p_const * xi + law.q_max
    return SubgradientInterval(g, g)


def j0_nu(xi: float, s: float, law: ContactLaw) -> float:
    """Directional derivative j_nu^0(xi; s) = max{g*s : g in d_j_nu(xi)}."""
    iv = d_j_nu(xi, law)
    return iv.hi * s if s >= 0.0 else iv.lo * s


# -- tangential law -----------------------------------------------------

def j_tau(xi) -> float:
    return float(np.linalg.norm(np.asarray(xi, dtype=float)))


def d_j_tau(xi):
    """Unit vector xi/||xi||, or the closed unit ball at xi = 0."""
    xi = np.asarray(xi, dtype=float)
    n = np.linalg.norm(xi)
    if n == 0.0:
        return UnitBall(1.0)
    return xi / n


def j0_tau(xi, s) -> float:
    """Directional derivative of the norm: xi_hat . s, or ||s|| at 0."""
    g = d_j_tau(xi)
    s = np.asarray(s, dtype=float)
    if isinstance(g, UnitBall):
        return g.radius * float(np.linalg.norm(s))
    return float(np.dot(g, s))


# -- lumped boundary potential ------------------------------------------

def J_boundary(trace: np.ndarray, weights: np.ndarray, law: ContactLaw) -> float:
    """Quadrature of the boundary potential over the contact nodes.

    `trace` is the (n_c, 2) array of (u_nu, u_taux) pairs; the tangential
    vector (u_taux, 0) has norm |u_taux|.  Convex in the trace.
    """
    trace = np.asarray(trace, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if trace.shape != (weights.shape[0], 2):
        raise ValueError(f"trace shape {trace.shape} does not match {weights.shape[0]} weights")
    return _kernels.boundary_energy(
        np.ascontiguousarray(weights),
        np.ascontiguousarray(trace[:, 0]),
        np.ascontiguousarray(trace[:, 1]),
        law.q_max, law.p_const, law.h_tau,
    )


# -- augmented envelope, normal part -------------------------------------
#
# Branches keyed on s = lam + eps*u  (pressure convention):
#   s < 0        separation: lam is driven to 0
#   0 <= s <= q  rigid contact: u is driven to 0, traction = lam
#   s > q        saturated: lam is driven to q_max, traction = q_max
# Values are glued C^1; at the branch seams the rigid branch is used.

def l_nu(u: float, lam: float, eps: float, law: ContactLaw) -> float:
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    q = law.q_max
    s = lam + eps * u
    if s < 0.0:
        return -0.5 * lam * lam / eps
    if s <= q:
        return lam * u + 0.5 * eps * u * u
    return q * u - 0.5 * (lam - q) ** 2 / eps


def grad_l_nu(u: float, lam: float, eps: float, law: ContactLaw) -> tuple[float, float]:
    """(d/du, d/dlam) of `l_nu`; continuous across the branch seams."""
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    q = law.q_max
    s = lam + eps * u
    if s < 0.0:
        return 0.0, -lam / eps
    if s <= q:
        return s, u
    return q, -(lam - q) / eps


def hess_l_nu(u: float, lam: float, eps: float, law: ContactLaw) -> tuple[float, float, float]:
    """Per-branch second derivatives (d2_uu, d2_ulam, d2_lamlam); the seam
    points take the rigid-branch values (deterministic semismooth choice)."""
    s = lam + eps * u
    if 0.0 <= s <= law.q_max:
        return eps, 1.0, 0.0
    return 0.0, 0.0, -1.0 / eps


# -- augmented envelope, tangential part ----------------------------------
#
# Branches keyed on ||w||, w = lam + eps*u, against the friction bound:
#   ||w|| <= h   stick: u driven to 0, traction = lam inside the ball
#   ||w|| >  h   slip:  traction = h * w/||w||, lam driven onto the ball

def l_tau(u, lam, eps: float, law: ContactLaw) -> float:
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    u = np.asarray(u, dtype=float)
    lam = np.asarray(lam, dtype=float)
    base = float(np.dot(lam, u)) + 0.5 * eps * float(np.dot(u, u))
    nw = float(np.linalg.norm(lam + eps * u))
    if nw <= law.h_tau:
        return base
    return base - 0.5 * (nw - law.h_tau) ** 2 / eps


def grad_l_tau(u, lam, eps: float, law: ContactLaw):
    """(d/du, d/dlam) of `l_tau` as a pair of 2-vectors."""
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    u = np.asarray(u, dtype=float)
    lam = np.asarray(lam, dtype=float)
    w = lam + eps * u
    nw = float(np.linalg.norm(w))
    if nw <= law.h_tau:
        return w.copy(), u.copy()
    what = w / nw
    return law.h_tau * what, u - ((nw - law.h_tau) / eps) * what


def l_tau_1d(u: float, lam: float, eps: float, law: ContactLaw) -> float:
    """Scalar tangential envelope (the 2D law restricted to (t, 0))."""
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    base = lam * u + 0.5 * eps * u * u
    aw = abs(lam + eps * u)
    if aw <= law.h_tau:
        return base
    return base - 0.5 * (aw - law.h_tau) ** 2 / eps


def grad_l_tau_1d(u: float, lam: float, eps: float, law: ContactLaw) -> tuple[float, float]:
    if eps <= 0.0:
        raise ValueError(f"penalty eps must be positive, got {eps}")
    w = lam + eps * u
    aw = abs(w)
    if aw <= law.h_tau:
        return w, u
    sg = math.copysign(1.0, w)
    return law.h_tau * sg, u - ((aw - law.h_tau) / eps) * sg


def hess_l_tau_1d(u: float, lam: float, eps: float, law: ContactLaw) -> tuple[float, float, float]:
    """Per-branch (d2_uu, d2_ulam, d2_lamlam); seams use the stick branch."""
    if abs(lam + eps * u) <= law.h_tau:
        return eps, 1.0, 0.0
    return 0.0, 0.0, -1.0 / eps


def p_smooth(xi: float, p_const: float) -> float:
    """Smooth part of the normal response, p(xi) = p_const * max(xi, 0)."""
    return p_const * xi if xi > 0.0 else 0.0


def dp_smooth(xi: float, p_const: float) -> float:
    """Derivative selection for `p_smooth` (0 at the kink)."""
    return p_const if xi > 0.0 else 0.0
