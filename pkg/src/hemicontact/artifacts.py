"""Deterministic CSV and SVG artifact writers.

CSV schemas are fixed so outputs can be golden-tested across runs:

    displacements: node_id,x,y,ux,uy
    contact:       node_id,x,u_nu,u_taux,sigma_nu,sigma_taux,normal_state,tangential_state
    errors:        method_solution,method_reference,h_denominator,v_error

Floats are written with repr-precision %.17g so re-reading reproduces the
values exactly; row order is fixed by sorted ids/keys.  SVG figures are
hand-rolled static drawings (deformed mesh with contact-force glyphs
mirrored below the boundary, and a log-log error chart).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from hemicontact.mesh import DofMap, TriMesh, nodal_field
from hemicontact.problem import SolveResult

__all__ = [
    "write_displacements_csv",
    "read_displacements_csv",
    "write_contact_csv",
    "write_errors_csv",
    "write_compare_csv",
    "svg_deformed",
    "svg_loglog",
]


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_displacements_csv(path, mesh: TriMesh, dof_map: DofMap, u: np.ndarray) -> None:
    field = nodal_field(mesh, dof_map, u)
    lines = ["node_id,x,y,ux,uy"]
    for nid in range(mesh.n_nodes):
        x, y = mesh.nodes[nid]
        lines.append(f"{nid},{_fmt(x)},{_fmt(y)},{_fmt(field[nid, 0])},{_fmt(field[nid, 1])}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_displacements_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Returns (coords (N,2), displacements (N,2)) ordered by node_id."""
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "node_id,x,y,ux,uy":
            raise ValueError(f"unexpected displacement CSV header: {header!r}")
        for line in fh:
            if line.strip():
                rows.append([float(v) for v in line.split(",")])
    rows.sort(key=lambda r: r[0])
    arr = np.asarray(rows)
    return arr[:, 1:3], arr[:, 3:5]


def write_contact_csv(path, mesh: TriMesh, dof_map: DofMap, result: SolveResult) -> None:
    if result.sets is not None:
        nstates = result.sets.normal_labels()
        tstates = result.sets.tangential_labels()
    else:
        nstates = [""] * dof_map.n_c
        tstates = [""] * dof_map.n_c
    lines = ["node_id,x,u_nu,u_taux,sigma_nu,sigma_taux,normal_state,tangential_state"]
    for i, node in enumerate(dof_map.contact_nodes):
        lines.append(",".join([
            str(int(node)),
            _fmt(mesh.nodes[node, 0]),
            _fmt(result.trace[i, 0]),
            _fmt(result.trace[i, 1]),
            _fmt(result.tractions[i, 0]),
            _fmt(result.tractions[i, 1]),
            nstates[i],
            tstates[i],
        ]))
    Path(path).write_text("\n".join(lines) + "\n")


def write_errors_csv(path, entries) -> None:
    """`entries`: iterable of (method_solution, method_reference, h_denominator, v_error)."""
    lines = ["method_solution,method_reference,h_denominator,v_error"]
    for ms, mr, hd, err in sorted(entries, key=lambda e: (e[0], e[1], -e[2])):
        lines.append(f"{ms},{mr},{int(hd)},{_fmt(err)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_compare_csv(path, rows) -> None:
    """`rows`: iterable of (method_a, method_b, rel_v_diff, time_a, time_b)."""
    lines = ["method_a,method_b,rel_v_norm_diff,wall_time_a,wall_time_b"]
    for a, b, d, ta, tb in rows:
        lines.append(f"{a},{b},{_fmt(d)},{_fmt(ta)},{_fmt(tb)}")
    Path(path).write_text("\n".join(lines) + "\n")


# -- SVG ------------------------------------------------------------------

_W, _H, _PAD = 640, 640, 60


def _sx(x: float) -> float:
    return _PAD + (_W - 2 * _PAD) * x


def _sy(y: float) -> float:
    return _H - _PAD - (_H - 2 * _PAD) * y


def svg_deformed(path, mesh: TriMesh, dof_map: DofMap, result: SolveResult,
                 force_scale: float = 0.25) -> None:
    """Deformed mesh edges plus contact-force glyphs mirrored below y = 0."""
    field = nodal_field(mesh, dof_map, result.u)
    pos = mesh.nodes + field

    edges = set()
    for tri in mesh.triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            edges.add((min(a, b), max(a, b)))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_sx(-0.05):.2f}" y1="{_sy(0):.2f}" x2="{_sx(1.1):.2f}" '
        f'y2="{_sy(0):.2f}" stroke="#888" stroke-width="1"/>',
    ]
    for a, b in sorted(edges):
        parts.append(
            f'<line x1="{_sx(pos[a, 0]):.2f}" y1="{_sy(pos[a, 1]):.2f}" '
            f'x2="{_sx(pos[b, 0]):.2f}" y2="{_sy(pos[b, 1]):.2f}" '
            f'stroke="#1f6fb2" stroke-width="0.7"/>')

    # foundation force on the body: (-sigma_taux, pressure); mirrored glyphs
    forces = np.column_stack([-result.tractions[:, 1], -result.tractions[:, 0]])
    fmax = max(float(np.abs(forces).max()), 1e-12)
    k = force_scale / fmax
    for i, node in enumerate(dof_map.contact_nodes):
        x0 = pos[node, 0]
        fx, fy = forces[i] * k
        parts.append(
            f'<line x1="{_sx(x0):.2f}" y1="{_sy(0):.2f}" '
            f'x2="{_sx(x0 + fx):.2f}" y2="{_sy(-abs(fy)):.2f}" '
            f'stroke="#c23b22" stroke-width="1.2"/>')
        parts.append(
            f'<circle cx="{_sx(x0 + fx):.2f}" cy="{_sy(-abs(fy)):.2f}" r="1.6" fill="#c23b22"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")


def svg_loglog(path, curves: dict[str, list[tuple[float, float]]]) -> None:
    """Log-log chart; `curves` maps labels to [(h, err), ...] lists."""
    pts = [(h, e) for series in curves.values() for h, e in series if e > 0]
    if not pts:
        Path(path).write_text('<svg xmlns="http://www.w3.org/2000/svg"/>\n')
        return
    lx = np.log10([p[0] for p in pts])
    ly = np.log10([p[1] for p in pts])
    x0, x1 = float(lx.min()), float(lx.max())
    y0, y1 = float(ly.min()), float(ly.max())
    x1 += 1e-9
    y1 += 1e-9

    def px(v):
        return _PAD + (_W - 2 * _PAD) * (v - x0) / (x1 - x0)

    def py(v):
        return _H - _PAD - (_H - 2 * _PAD) * (v - y0) / (y1 - y0)

    palette = ["#1f6fb2", "#c23b22", "#3a923a", "#8c5fa8", "#b8860b",
               "#2aa6a1", "#d06090", "#6b6b6b", "#4d5fd0"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" '
        f'fill="none" stroke="#444"/>',
        f'<text x="{_W // 2}" y="{_H - 16}" font-size="13" text-anchor="middle">'
        f'log10 h</text>',
        f'<text x="16" y="{_H // 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_H // 2})">log10 energy-norm error</text>',
    ]
    for ci, (label, series) in enumerate(sorted(curves.items())):
        color = palette[ci % len(palette)]
        coords = " ".join(f"{px(np.log10(h)):.2f},{py(np.log10(e)):.2f}"
                          for h, e in sorted(series) if e > 0)
        if coords:
            parts.append(f'<polyline points="{coords}" fill="none" '
                         f'stroke="{color}" stroke-width="1.4"/>')
        parts.append(f'<text x="{_W - _PAD + 4}" y="{_PAD + 14 * (ci + 1)}" '
                     f'font-size="10" fill="{color}">{label}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
