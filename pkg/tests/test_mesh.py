import numpy as np
import pytest

from hemicontact.assembly import MaterialLaw, assemble_stiffness, v_norm
from hemicontact.mesh import (build_dof_map, build_uniform_mesh, contact_geometry,
                              contact_trace, nodal_field, prolong, prolong_to)


@pytest.mark.parametrize("h,n_nodes,n_tri", [(0.5, 9, 8), (0.25, 25, 32)])
def test_counts_match_lattice(h, n_nodes, n_tri):
    mesh = build_uniform_mesh(h)
    assert mesh.n_nodes == n_nodes
    assert mesh.n_triangles == n_tri


@pytest.mark.parametrize("h", [0.3, 1.0, 0.0, -0.5])
def test_invalid_mesh_size_rejected(h):
    with pytest.raises(ValueError):
        build_uniform_mesh(h)


def test_one_third_is_a_valid_size():
    mesh = build_uniform_mesh(1.0 / 3.0)
    assert mesh.n == 3


def test_triangles_positive_area_and_cover_domain():
    mesh = build_uniform_mesh(1 / 8)
    p = mesh.nodes[mesh.triangles]
    areas = 0.5 * ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
                   - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1]))
    assert np.all(areas > 0)
    assert np.allclose(areas, mesh.h ** 2 / 2)
    assert abs(areas.sum() - 1.0) < 1e-12


def test_boundary_edges_partition_and_tags():
    mesh = build_uniform_mesh(1 / 4)
    assert len(mesh.boundary_edges) == 4 * mesh.n
    seen = set()
    for (a, b), tag in zip(mesh.boundary_edges, mesh.boundary_tags):
        key = (min(a, b), max(a, b))
        assert key not in seen
        seen.add(key)
        pa, pb = mesh.nodes[a], mesh.nodes[b]
        if tag == "D":
            assert pa[0] == pb[0] == 0.0
        elif tag == "C":
            assert pa[1] == pb[1] == 0.0
        else:
            assert (pa[1] == pb[1] == 1.0) or (pa[0] == pb[0] == 1.0)


@pytest.mark.parametrize("h,n_tot,n_c", [(0.5, 6, 2), (0.25, 20, 4)])
def test_dof_counts(h, n_tot, n_c):
    mesh = build_uniform_mesh(h)
    dm = build_dof_map(mesh)
    assert dm.n_tot == n_tot
    assert dm.n_c == n_c
    assert dm.n_dofs == 2 * n_tot
    assert dm.contact_dofs.shape == (2 * n_c,)


def test_corner_ownership():
    mesh = build_uniform_mesh(0.5)
    dm = build_dof_map(mesh)
    origin = mesh.node_id(0, 0)
    right = mesh.node_id(mesh.n, 0)
    assert np.all(dm.dof_of_node[origin] == -1)       # clamped corner
    assert right in dm.contact_nodes                   # contact corner
    assert np.allclose(mesh.nodes[dm.contact_nodes, 0], [0.5, 1.0])


def test_contact_nodes_sorted_by_x():
    mesh = build_uniform_mesh(1 / 8)
    dm = build_dof_map(mesh)
    xs = mesh.nodes[dm.contact_nodes, 0]
    assert np.all(np.diff(xs) > 0)
    assert np.all(mesh.nodes[dm.contact_nodes, 1] == 0.0)


def test_contact_weights():
    mesh = build_uniform_mesh(1 / 8)
    dm = build_dof_map(mesh)
    geom = contact_geometry(mesh, dm)
    w = geom.node_weights
    assert np.allclose(w[:-1], mesh.h)
    assert w[-1] == pytest.approx(mesh.h / 2)
    assert w.sum() == pytest.approx(1.0 - mesh.h / 2)
    assert w.sum() <= 1.0


def test_trace_values_and_sign_convention():
    mesh = build_uniform_mesh(0.5)
    dm = build_dof_map(mesh)
    u = np.zeros(dm.n_dofs)
    assert np.all(contact_trace(dm, u) == 0.0)

    node = dm.contact_nodes[0]
    xdof, ydof = dm.dof_of_node[node]
    u[xdof], u[ydof] = 0.2, -0.1
    tr = contact_trace(dm, u)
    assert tr[0] == pytest.approx([0.1, 0.2])  # penetration positive

    u[xdof], u[ydof] = 0.0, 0.3
    tr = contact_trace(dm, u)
    assert tr[0] == pytest.approx([-0.3, 0.0])  # gap opens


def test_trace_linearity(rng):
    mesh = build_uniform_mesh(1 / 4)
    dm = build_dof_map(mesh)
    u, v = rng.standard_normal((2, dm.n_dofs))
    a, b = 0.37, -1.2
    lhs = contact_trace(dm, a * u + b * v)
    rhs = a * contact_trace(dm, u) + b * contact_trace(dm, v)
    assert np.abs(lhs - rhs).max() < 1e-12


def test_trace_dimension_mismatch():
    mesh = build_uniform_mesh(0.5)
    dm = build_dof_map(mesh)
    with pytest.raises(ValueError):
        contact_trace(dm, np.zeros(dm.n_dofs + 1))


def test_prolong_reproduces_affine_fields():
    coarse = build_uniform_mesh(0.5)
    fine = build_uniform_mesh(0.25)
    field = np.column_stack([coarse.nodes[:, 0], np.zeros(coarse.n_nodes)])
    out = prolong(coarse, fine, field)
    assert np.allclose(out[:, 0], fine.nodes[:, 0])
    assert np.all(out[:, 1] == 0.0)
    assert np.all(prolong(coarse, fine, np.zeros((coarse.n_nodes, 2))) == 0.0)


def test_prolong_rejects_non_nested():
    with pytest.raises(ValueError):
        prolong(build_uniform_mesh(0.5), build_uniform_mesh(1 / 3),
                np.zeros((9, 2)))
    with pytest.raises(ValueError):
        prolong_to(build_uniform_mesh(0.25), build_uniform_mesh(1 / 6),
                   np.zeros((25, 2)))


def test_prolong_preserves_energy_norm(rng):
    mat = MaterialLaw(lam=4.0, eta=4.0)
    coarse = build_uniform_mesh(1 / 4)
    dm_c = build_dof_map(coarse)
    _, M_c = assemble_stiffness(coarse, dm_c, mat)
    fine = build_uniform_mesh(1 / 16)
    dm_f = build_dof_map(fine)
    _, M_f = assemble_stiffness(fine, dm_f, mat)

    u = rng.standard_normal(dm_c.n_dofs)
    coarse_norm = v_norm(M_c, u)
    out = prolong_to(coarse, fine, nodal_field(coarse, dm_c, u))
    fine_norm = v_norm(M_f, out[dm_f.free_nodes].ravel())
    assert abs(fine_norm - coarse_norm) < 1e-10
