"""Static condensation of the free-DOF system onto the contact boundary.

With the DOF partition I (interior = free, non-contact) and C (contact),
the energy  1/2 u'Ku - F'u  minimized over the interior at fixed contact
values equals  1/2 u_C' S u_C - g' u_C + const  with

    S = K_CC - K_CI K_II^{-1} K_IC,     g = F_C - K_CI K_II^{-1} F_I.

S is small and dense (2 n_C square); the interior factorization is kept
for recovering interior values after the nonlinear solve.  Valid for all
solvers here because the nonsmooth terms act only through the contact
trace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from hemicontact.assembly import DiscreteSystem

__all__ = ["ReducedSystem", "reduce_system", "recover_interior"]


@dataclass(frozen=True)
class ReducedSystem:
    """Condensed contact-boundary system and interior recovery data."""

    S: np.ndarray              # (2 n_C, 2 n_C) dense SPD
    g: np.ndarray              # (2 n_C,)
    contact_dofs: np.ndarray
    interior_dofs: np.ndarray
    interior_lu: spla.SuperLU
    K_IC: sp.csr_matrix
    F_I: np.ndarray
    n_dofs: int

    @property
    def n_contact_dofs(self) -> int:
        return self.S.shape[0]


def reduce_system(system: DiscreteSystem) -> ReducedSystem:
    """Eliminate the interior block of an assembled system."""
    K, F = system.K, system.F
    cdofs = system.dof_map.contact_dofs
    mask = np.ones(K.shape[0], dtype=bool)
    mask[cdofs] = False
    idofs = np.flatnonzero(mask)

    K_II = K[idofs][:, idofs].tocsc()
    K_IC = K[idofs][:, cdofs].tocsr()
    K_CC = K[cdofs][:, cdofs].toarray()

    try:
        lu = spla.splu(K_II)
    except RuntimeError as exc:  # singular interior block: malformed mesh
        raise ValueError("interior stiffness block is singular") from exc

    X = lu.solve(K_IC.toarray())
    S = K_CC - K_IC.T @ X
    g = F[cdofs] - K_IC.T @ lu.solve(F[idofs])

    return ReducedSystem(S=S, g=g, contact_dofs=cdofs, interior_dofs=idofs,
                         interior_lu=lu, K_IC=K_IC, F_I=F[idofs],
                         n_dofs=K.shape[0])


def recover_interior(red: ReducedSystem, u_C: np.ndarray) -> np.ndarray:
    """Free-DOF displacement vector with the interior solved at fixed
    contact values: u_I = K_II^{-1}(F_I - K_IC u_C)."""
    u_C = np.asarray(u_C, dtype=float)
    if u_C.shape != (red.n_contact_dofs,):
        raise ValueError(f"expected contact vector of length {red.n_contact_dofs}, got {u_C.shape}")
    u = np.empty(red.n_dofs)
    u[red.contact_dofs] = u_C
    u[red.interior_dofs] = red.interior_lu.solve(red.F_I - red.K_IC @ u_C)
    return u
