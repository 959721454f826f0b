"""Finite element assembly for plane-strain linear elasticity on P1
triangles: stiffness and energy-norm Gram matrices, load vectors, element
stresses, and nodal contact-traction recovery.

Strains of piecewise-affine displacements are constant per triangle, and
all data (material, body force, boundary traction) are constant, so the
one-point / trapezoidal quadratures used here are exact.  Clamped DOFs
are removed by row/column elimination, keeping the free-DOF matrices
symmetric positive definite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from hemicontact.mesh import ContactGeometry, DofMap, TriMesh, nodal_field, prolong_to

__all__ = [
    "MaterialLaw",
    "BodyLoad",
    "DiscreteSystem",
    "elasticity_apply",
    "assemble_stiffness",
    "assemble_stiffness_full",
    "assemble_load",
    "assemble_system",
    "v_norm",
    "v_error",
    "element_stress",
    "element_stresses",
    "contact_traction",
]


@dataclass(frozen=True)
class MaterialLaw:
    """Isotropic elasticity sigma = 2*eta*tau + lam*tr(tau)*I."""

    lam: float
    eta: float

    def __post_init__(self):
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not (np.isfinite(self.eta) and self.eta > 0):
            raise ValueError(f"eta must be positive, got {self.eta}")

    @property
    def m_a(self) -> float:
        """Strong-monotonicity constant 2*eta of the elasticity operator."""
        return 2.0 * self.eta


@dataclass(frozen=True)
class BodyLoad:
    """Constant body force density and constant traction on the loaded edges."""

    f0: np.ndarray
    fN: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f0", np.asarray(self.f0, dtype=float).reshape(2))
        object.__setattr__(self, "fN", np.asarray(self.fN, dtype=float).reshape(2))
        if not (np.all(np.isfinite(self.f0)) and np.all(np.isfinite(self.fN))):
            raise ValueError("load components must be finite")


@dataclass(frozen=True)
class DiscreteSystem:
    """Assembled free-DOF system: stiffness K, energy Gram matrix M_V,
    load vector F, plus the maps needed to interpret vectors."""

    K: sp.csr_matrix
    M_V: sp.csr_matrix
    F: np.ndarray
    mesh: TriMesh
    dof_map: DofMap
    geometry: ContactGeometry
    material: MaterialLaw


def elasticity_apply(mat: MaterialLaw, strain: np.ndarray) -> np.ndarray:
    """Apply the elasticity tensor to a symmetric 2x2 strain."""
    strain = np.asarray(strain, dtype=float)
    if strain.shape != (2, 2):
        raise ValueError(f"expected a 2x2 tensor, got shape {strain.shape}")
    scale = max(1.0, np.abs(strain).max())
    if abs(strain[0, 1] - strain[1, 0]) > 1e-12 * scale:
        raise ValueError("strain tensor is not symmetric")
    return 2.0 * mat.eta * strain + mat.lam * np.trace(strain) * np.eye(2)


def _p1_gradients(mesh: TriMesh):
    """Per-triangle areas and basis-function gradients.

    Returns (areas (n_tri,), b (n_tri, 3), c (n_tri, 3)) where the
    gradient of shape function k on a triangle is (b[k], c[k]).
    """
    p = mesh.nodes[mesh.triangles]          # (n_tri, 3, 2)
    x, y = p[:, :, 0], p[:, :, 1]
    det = ((x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0])
           - (x[:, 2] - x[:, 0]) * (y[:, 1] - y[:, 0]))
    area = 0.5 * det
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1) / det[:, None]
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1) / det[:, None]
    return area, b, c


def _elastic_moduli(mat: MaterialLaw | None) -> np.ndarray:
    """Voigt matrix for [e_xx, e_yy, g_xy] with engineering shear g_xy.

    `None` selects the moduli of the energy inner product (e(u), e(v)),
    i.e. lam = 0, 2*eta = 1.
    """
    if mat is None:
        return np.diag([1.0, 1.0, 0.5])
    lam, eta = mat.lam, mat.eta
    return np.array([
        [2.0 * eta + lam, lam, 0.0],
        [lam, 2.0 * eta + lam, 0.0],
        [0.0, 0.0, eta],
    ])


def _assemble_matrix(mesh: TriMesh, moduli: np.ndarray) -> sp.csr_matrix:
    """Assemble the quadratic form over all nodal DOFs (no elimination)."""
    area, b, c = _p1_gradients(mesh)
    n_tri = mesh.n_triangles

    # strain-displacement matrices B: (n_tri, 3, 6)
    B = np.zeros((n_tri, 3, 6))
    for k in range(3):
        B[:, 0, 2 * k] = b[:, k]
        B[:, 1, 2 * k + 1] = c[:, k]
        B[:, 2, 2 * k] = c[:, k]
        B[:, 2, 2 * k + 1] = b[:, k]

    ke = np.einsum("t,tia,ij,tjb->tab", area, B, moduli, B)

    dofs = np.empty((n_tri, 6), dtype=np.int64)
    dofs[:, 0::2] = 2 * mesh.triangles
    dofs[:, 1::2] = 2 * mesh.triangles + 1
    rows = np.repeat(dofs, 6, axis=1).ravel()
    cols = np.tile(dofs, (1, 6)).ravel()
    m = sp.coo_matrix((ke.ravel(), (rows, cols)),
                      shape=(2 * mesh.n_nodes, 2 * mesh.n_nodes))
    return m.tocsr()


def assemble_stiffness_full(mesh: TriMesh, mat: MaterialLaw | None):
    """Stiffness over all nodal DOFs, before clamped-DOF elimination.

    Used by the rigid-motion nullspace checks; pass `mat=None` for the
    energy Gram matrix.
    """
    return _assemble_matrix(mesh, _elastic_moduli(mat))


def assemble_stiffness(mesh: TriMesh, dof_map: DofMap, mat: MaterialLaw):
    """Free-DOF stiffness K and energy Gram matrix M_V (both CSR, SPD)."""
    full_dofs = np.empty(dof_map.n_dofs, dtype=np.int64)
    full_dofs[0::2] = 2 * dof_map.free_nodes
    full_dofs[1::2] = 2 * dof_map.free_nodes + 1
    K = assemble_stiffness_full(mesh, mat)[full_dofs][:, full_dofs].tocsr()
    M = assemble_stiffness_full(mesh, None)[full_dofs][:, full_dofs].tocsr()
    return K, M


def assemble_load(mesh: TriMesh, dof_map: DofMap, load: BodyLoad) -> np.ndarray:
    """Free-DOF load vector: area/3 of constant body force per triangle
    vertex plus trapezoidal edge quadrature of the boundary traction."""
    f_nodal = np.zeros((mesh.n_nodes, 2))

    area, _, _ = _p1_gradients(mesh)
    for k in range(3):
        np.add.at(f_nodal, mesh.triangles[:, k], np.outer(area / 3.0, load.f0))

    neumann = mesh.boundary_tags == "N"
    for a, bnode in mesh.boundary_edges[neumann]:
        length = np.linalg.norm(mesh.nodes[bnode] - mesh.nodes[a])
        f_nodal[a] += 0.5 * length * load.fN
        f_nodal[bnode] += 0.5 * length * load.fN

    return f_nodal[dof_map.free_nodes].ravel()


def assemble_system(mesh: TriMesh, dof_map: DofMap, geometry: ContactGeometry,
                    mat: MaterialLaw, load: BodyLoad) -> DiscreteSystem:
    K, M = assemble_stiffness(mesh, dof_map, mat)
    F = assemble_load(mesh, dof_map, load)
    return DiscreteSystem(K=K, M_V=M, F=F, mesh=mesh, dof_map=dof_map,
                          geometry=geometry, material=mat)


def v_norm(M_V: sp.spmatrix, v: np.ndarray) -> float:
    """Energy norm sqrt(v' M_V v)."""
    v = np.asarray(v, dtype=float)
    return float(np.sqrt(max(v @ (M_V @ v), 0.0)))


def v_error(mesh_h: TriMesh, dof_map_h: DofMap, u_h: np.ndarray,
            mesh_ref: TriMesh, dof_map_ref: DofMap, M_V_ref: sp.spmatrix,
            u_ref: np.ndarray) -> float:
    """Energy-norm distance between a coarse solution and a reference on
    a nested finer mesh; the coarse field is interpolated exactly."""
    field = nodal_field(mesh_h, dof_map_h, u_h)
    fine = prolong_to(mesh_h, mesh_ref, field)
    diff = fine[dof_map_ref.free_nodes].ravel() - np.asarray(u_ref, dtype=float)
    return v_norm(M_V_ref, diff)


def element_stresses(mesh: TriMesh, dof_map: DofMap, mat: MaterialLaw,
                     u: np.ndarray) -> np.ndarray:
    """Constant stress per triangle, as an (n_tri, 2, 2) array."""
    field = nodal_field(mesh, dof_map, u)
    _, b, c = _p1_gradients(mesh)
    vals = field[mesh.triangles]  # (n_tri, 3, 2)
    ux_x = np.einsum("tk,tk->t", b, vals[:, :, 0])
    ux_y = np.einsum("tk,tk->t", c, vals[:, :, 0])
    uy_x = np.einsum("tk,tk->t", b, vals[:, :, 1])
    uy_y = np.einsum("tk,tk->t", c, vals[:, :, 1])
    exy = 0.5 * (ux_y + uy_x)
    tr = ux_x + uy_y
    sxx = 2.0 * mat.eta * ux_x + mat.lam * tr
    syy = 2.0 * mat.eta * uy_y + mat.lam * tr
    sxy = 2.0 * mat.eta * exy
    out = np.empty((mesh.n_triangles, 2, 2))
    out[:, 0, 0] = sxx
    out[:, 1, 1] = syy
    out[:, 0, 1] = out[:, 1, 0] = sxy
    return out


def element_stress(mesh: TriMesh, dof_map: DofMap, mat: MaterialLaw,
                   u: np.ndarray, triangle_index: int) -> np.ndarray:
    """Stress tensor of one triangle."""
    return element_stresses(mesh, dof_map, mat, u)[triangle_index]


def contact_traction(mesh: TriMesh, dof_map: DofMap, mat: MaterialLaw,
                     u: np.ndarray) -> np.ndarray:
    """Nodal tractions on the contact boundary from adjacent-element
    stress averaging.

    Returns an (n_c, 2) array of (sigma_nu, sigma_taux) per contact node,
    where sigma_nu = sigma_yy and sigma_taux = -sigma_xy for the outward
    normal (0, -1).  First-order accurate; the active-set classification
    tolerances account for that.
    """
    stresses = element_stresses(mesh, dof_map, mat, u)
    area, _, _ = _p1_gradients(mesh)

    out = np.empty((dof_map.n_c, 2))
    for i, node in enumerate(dof_map.contact_nodes):
        adj = np.flatnonzero(np.any(mesh.triangles == node, axis=1))
        wts = area[adj]
        s = np.einsum("t,tij->ij", wts, stresses[adj]) / wts.sum()
        out[i, 0] = s[1, 1]
        out[i, 1] = -s[0, 1]
    return out
