"""Uniform triangulation of the unit square and degree-of-freedom maps.

Boundary split: the left edge (x = 0) is clamped, the bottom edge (y = 0)
is the contact boundary, top and right edges carry surface tractions.
Each grid square is split along its bottom-left-to-top-right diagonal so
that meshes with halved spacing are nested and exact interpolation
between them is available (`prolong`).

Conventions used throughout the package (d = 2):

* outward normal on the contact boundary: nu = (0, -1),
* normal trace  u_nu  = u . nu = -u_y   (positive = penetration),
* tangential trace u_tau = (u_x, 0), represented by the scalar u_x.

All structures are immutable after construction and safe to share between
concurrent solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TriMesh",
    "DofMap",
    "ContactGeometry",
    "build_uniform_mesh",
    "build_dof_map",
    "contact_geometry",
    "contact_trace",
    "prolong",
    "prolong_to",
    "nodal_field",
    "free_vector",
]

#: boundary part tags
TAG_DIRICHLET = "D"
TAG_NEUMANN = "N"
TAG_CONTACT = "C"

#: outward normal of the contact boundary
CONTACT_NORMAL = np.array([0.0, -1.0])


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TriMesh:
    """Uniform triangulation of [0,1]^2 with tagged boundary edges."""

    h: float
    n: int                      # 1/h
    nodes: np.ndarray           # (n_nodes, 2) lattice coordinates
    triangles: np.ndarray       # (n_tri, 3) vertex indices, counterclockwise
    boundary_edges: np.ndarray  # (n_edges, 2) node index pairs
    boundary_tags: np.ndarray   # (n_edges,) one of "D", "N", "C"

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def node_id(self, i: int, j: int) -> int:
        """Index of the lattice node (i*h, j*h)."""
        return j * (self.n + 1) + i


@dataclass(frozen=True)
class DofMap:
    """Free-node numbering and the contact-trace index maps.

    Nodes on the clamped edge carry no unknowns; every other node carries
    an (x, y) pair of degrees of freedom.  Contact nodes are the free
    nodes on y = 0, ordered by ascending x; their DOFs are listed in
    `contact_dofs` as [x_0, y_0, x_1, y_1, ...] and that interleaved
    order is the coordinate system of every condensed solver.
    """

    free_nodes: np.ndarray     # (n_tot,) node indices
    contact_nodes: np.ndarray  # (n_c,) node indices, ascending x
    dof_of_node: np.ndarray    # (n_nodes, 2), -1 for constrained nodes
    contact_dofs: np.ndarray   # (2*n_c,) interleaved [x, y] per contact node

    @property
    def n_tot(self) -> int:
        return self.free_nodes.shape[0]

    @property
    def n_dofs(self) -> int:
        return 2 * self.n_tot

    @property
    def n_c(self) -> int:
        return self.contact_nodes.shape[0]

    @property
    def contact_xdofs(self) -> np.ndarray:
        return self.contact_dofs[0::2]

    @property
    def contact_ydofs(self) -> np.ndarray:
        return self.contact_dofs[1::2]


@dataclass(frozen=True)
class ContactGeometry:
    """Outward normal and lumped boundary quadrature weights on y = 0."""

    normal: np.ndarray        # (2,) = (0, -1)
    node_weights: np.ndarray  # (n_c,) trapezoidal weights


def build_uniform_mesh(h: float) -> TriMesh:
    """Triangulate [0,1]^2 with spacing ``h`` (h = 1/n, integer n >= 2).

    Raises ValueError when 1/h is not an integer or is below 2.
    """
    if not np.isfinite(h) or h <= 0:
        raise ValueError(f"mesh size must be positive, got {h}")
    n = int(round(1.0 / h))
    if abs(n * h - 1.0) > 1e-9:
        raise ValueError(f"1/h must be an integer, got h={h}")
    if n < 2:
        raise ValueError(f"1/h must be at least 2, got h={h}")

    side = n + 1
    ii, jj = np.meshgrid(np.arange(side), np.arange(side), indexing="xy")
    nodes = np.column_stack([ii.ravel() / n, jj.ravel() / n])

    def nid(i, j):
        return j * side + i

    tris = np.empty((2 * n * n, 3), dtype=np.int64)
    k = 0
    for j in range(n):
        for i in range(n):
            a, b = nid(i, j), nid(i + 1, j)
            c, d = nid(i + 1, j + 1), nid(i, j + 1)
            tris[k] = (a, b, c)       # lower triangle, diagonal a-c
            tris[k + 1] = (a, c, d)   # upper triangle
            k += 2

    edges = []
    tags = []
    for j in range(n):  # left edge, clamped
        edges.append((nid(0, j), nid(0, j + 1)))
        tags.append(TAG_DIRICHLET)
    for i in range(n):  # bottom edge, contact
        edges.append((nid(i, 0), nid(i + 1, 0)))
        tags.append(TAG_CONTACT)
    for i in range(n):  # top edge, traction
        edges.append((nid(i, n), nid(i + 1, n)))
        tags.append(TAG_NEUMANN)
    for j in range(n):  # right edge, traction
        edges.append((nid(n, j), nid(n, j + 1)))
        tags.append(TAG_NEUMANN)

    return TriMesh(
        h=1.0 / n,
        n=n,
        nodes=_freeze(nodes),
        triangles=_freeze(tris),
        boundary_edges=_freeze(np.asarray(edges, dtype=np.int64)),
        boundary_tags=_freeze(np.asarray(tags)),
    )


def build_dof_map(mesh: TriMesh) -> DofMap:
    """Number the unknowns: clamped nodes (x = 0) drop out, the rest get
    an interleaved (x, y) DOF pair in node-index order."""
    x = mesh.nodes[:, 0]
    y = mesh.nodes[:, 1]
    free_mask = x > 0.0
    free_nodes = np.flatnonzero(free_mask)

    dof_of_node = np.full((mesh.n_nodes, 2), -1, dtype=np.int64)
    dof_of_node[free_nodes, 0] = 2 * np.arange(free_nodes.size)
    dof_of_node[free_nodes, 1] = 2 * np.arange(free_nodes.size) + 1

    contact = free_nodes[y[free_nodes] == 0.0]
    contact = contact[np.argsort(x[contact], kind="stable")]
    contact_dofs = dof_of_node[contact].ravel()

    return DofMap(
        free_nodes=_freeze(free_nodes),
        contact_nodes=_freeze(contact),
        dof_of_node=_freeze(dof_of_node),
        contact_dofs=_freeze(contact_dofs),
    )


def contact_geometry(mesh: TriMesh, dof_map: DofMap) -> ContactGeometry:
    """Trapezoidal weights: h per interior contact node, h/2 at x = 1.

    The half-edge adjacent to the clamped corner (0, 0) belongs to a
    constrained node and is assigned to nothing, so the weights sum to
    1 - h/2.
    """
    xs = mesh.nodes[dof_map.contact_nodes, 0]
    w = np.full(xs.shape, mesh.h)
    w[np.isclose(xs, 1.0)] = mesh.h / 2.0
    return ContactGeometry(normal=_freeze(CONTACT_NORMAL.copy()), node_weights=_freeze(w))


def contact_trace(dof_map: DofMap, u: np.ndarray) -> np.ndarray:
    """Boundary trace of a free-DOF displacement vector.

    Returns an (n_c, 2) array of (u_nu, u_taux) pairs per contact node:
    u_nu = -u_y (penetration positive), u_taux = u_x.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (dof_map.n_dofs,):
        raise ValueError(f"expected displacement vector of length {dof_map.n_dofs}, got {u.shape}")
    return np.column_stack([-u[dof_map.contact_ydofs], u[dof_map.contact_xdofs]])


def nodal_field(mesh: TriMesh, dof_map: DofMap, u: np.ndarray) -> np.ndarray:
    """Expand a free-DOF vector to an (n_nodes, 2) array with clamped zeros."""
    u = np.asarray(u, dtype=float)
    if u.shape != (dof_map.n_dofs,):
        raise ValueError(f"expected displacement vector of length {dof_map.n_dofs}, got {u.shape}")
    full = np.zeros((mesh.n_nodes, 2))
    full[dof_map.free_nodes] = u.reshape(-1, 2)
    return full


def free_vector(dof_map: DofMap, field: np.ndarray) -> np.ndarray:
    """Inverse of `nodal_field`: gather the free-node rows."""
    return np.asarray(field, dtype=float)[dof_map.free_nodes].ravel()


def prolong(coarse: TriMesh, fine: TriMesh, field: np.ndarray) -> np.ndarray:
    """Exact interpolation of a nodal field from a mesh to its uniform
    refinement (fine.n == 2 * coarse.n).

    New nodes bisect coarse edges (including the square diagonals), so
    their values are averages of the two endpoint values; coarse nodes
    copy.  The interpolant represents the same piecewise-affine function.
    """
    if fine.n != 2 * coarse.n:
        raise ValueError(f"meshes are not nested: {coarse.n} -> {fine.n}")
    field = np.asarray(field, dtype=float)
    if field.shape[0] != coarse.n_nodes:
        raise ValueError("field does not match the coarse mesh")

    nc, nf = coarse.n, fine.n
    out = np.empty((fine.n_nodes,) + field.shape[1:], dtype=float)
    ii, jj = np.meshgrid(np.arange(nf + 1), np.arange(nf + 1), indexing="xy")
    ii, jj = ii.ravel(), jj.ravel()

    def cid(i, j):
        return j * (nc + 1) + i

    even = (ii % 2 == 0) & (jj % 2 == 0)
    horiz = (ii % 2 == 1) & (jj % 2 == 0)
    vert = (ii % 2 == 0) & (jj % 2 == 1)
    diag = (ii % 2 == 1) & (jj % 2 == 1)

    out[even] = field[cid(ii[even] // 2, jj[even] // 2)]
    out[horiz] = 0.5 * (field[cid((ii[horiz] - 1) // 2, jj[horiz] // 2)]
                        + field[cid((ii[horiz] + 1) // 2, jj[horiz] // 2)])
    out[vert] = 0.5 * (field[cid(ii[vert] // 2, (jj[vert] - 1) // 2)]
                       + field[cid(ii[vert] // 2, (jj[vert] + 1) // 2)])
    # odd-odd nodes sit on the bisected bottom-left-to-top-right diagonals
    out[diag] = 0.5 * (field[cid((ii[diag] - 1) // 2, (jj[diag] - 1) // 2)]
                       + field[cid((ii[diag] + 1) // 2, (jj[diag] + 1) // 2)])
    return out


def prolong_to(coarse: TriMesh, target: TriMesh, field: np.ndarray) -> np.ndarray:
    """Repeated `prolong` until the target mesh is reached."""
    ratio, rem = divmod(target.n, coarse.n)
    if rem or ratio & (ratio - 1):
        raise ValueError(f"target size {target.n} is not a power-of-two refinement of {coarse.n}")
    mesh, out = coarse, np.asarray(field, dtype=float)
    while mesh.n < target.n:
        finer = build_uniform_mesh(1.0 / (2 * mesh.n))
        out = prolong(mesh, finer, out)
        mesh = finer
    return out
