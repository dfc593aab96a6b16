"""Report writers: delimited convergence tables, VTK snapshots and
matplotlib figures rendered to files next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import ErrorRecord
from .mesh import SurfaceMesh

CSV_HEADER = "level,h,n_dofs,err_l2,err_linf,err_h1,eoc_l2,eoc_linf,eoc_h1"


def _cell(x) -> str:
    return "" if x is None else repr(float(x))


def format_csv(records: list[ErrorRecord], slopes: dict[str, float] | None = None) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.level),
                    repr(float(r.h)),
                    str(r.n_dofs),
                    repr(float(r.err_l2)),
                    repr(float(r.err_linf)),
                    repr(float(r.err_h1)),
                    _cell(r.eoc_l2),
                    _cell(r.eoc_linf),
                    _cell(r.eoc_h1),
                ]
            )
        )
    if slopes is not None:
        lines.append(
            "# slope_l2={}, slope_linf={}, slope_h1={}".format(
                repr(float(slopes["slope_l2"])),
                repr(float(slopes["slope_linf"])),
                repr(float(slopes["slope_h1"])),
            )
        )
    lines.append(
        "# norms: err_l2/err_h1 are square roots of the discrete bilinear "
        "forms, err_linf is the max absolute nodal error"
    )
    return "\n".join(lines) + "\n"


def write_csv(
    records: list[ErrorRecord], slopes: dict[str, float] | None, path
) -> None:
    with open(path, "w") as fh:
        fh.write(format_csv(records, slopes))


def write_vtk(
    mesh: SurfaceMesh, point_data: dict[str, np.ndarray], path, title: str = "svem output"
) -> None:
    """Legacy ASCII VTK polydata with per-vertex scalar fields."""
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET POLYDATA",
        f"POINTS {mesh.n_vertices} double",
    ]
    for x, y, z in mesh.vertices:
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    total = sum(len(f) + 1 for f in mesh.faces)
    lines.append(f"POLYGONS {mesh.n_faces} {total}")
    for f in mesh.faces:
        lines.append(" ".join([str(len(f)), *map(str, f)]))
    if point_data:
        lines.append(f"POINT_DATA {mesh.n_vertices}")
        for name, values in point_data.items():
            lines.append(f"SCALARS {name} double 1")
            lines.append("LOOKUP_TABLE default")
            lines.extend(repr(float(v)) for v in values)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def plot_convergence(records: list[ErrorRecord], slopes: dict[str, float], path) -> None:
    """Log-log error plot with first and second order reference slopes."""
    hs = np.array([r.h for r in records])
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    series = [
        ("err_l2", [r.err_l2 for r in records], "o-"),
        ("err_linf", [r.err_linf for r in records], "s-"),
        ("err_h1", [r.err_h1 for r in records], "^-"),
    ]
    for name, es, style in series:
        ax.loglog(hs, es, style, label=f"{name} (slope {slopes['slope_' + name[4:]]:.2f})")
    anchor = hs.max()
    e0 = max(r.err_h1 for r in records)
    ax.loglog(hs, e0 * (hs / anchor), "k--", lw=0.8, label="order 1")
    ax.loglog(hs, e0 * (hs / anchor) ** 2, "k:", lw=0.8, label="order 2")
    ax.set_xlabel("h")
    ax.set_ylabel("error")
    ax.grid(True, which="both", lw=0.3, alpha=0.5)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_solution(mesh: SurfaceMesh, values: np.ndarray, path, title: str = "") -> None:
    """3d view of the mesh with faces colored by the vertex-mean value."""
    from mpl_toolkits.mplot3d.art3d import Poly3DCollection

    polys = [mesh.vertices[list(f)] for f in mesh.faces]
    face_vals = np.array([values[list(f)].mean() for f in mesh.faces])
    fig = plt.figure(figsize=(6.0, 5.0))
    ax = fig.add_subplot(projection="3d")
    coll = Poly3DCollection(polys, edgecolor="k", linewidths=0.15)
    coll.set_array(face_vals)
    ax.add_collection3d(coll)
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    mid = 0.5 * (lo + hi)
    half = 0.55 * (hi - lo).max()
    ax.set_xlim(mid[0] - half, mid[0] + half)
    ax.set_ylim(mid[1] - half, mid[1] + half)
    ax.set_zlim(mid[2] - half, mid[2] + half)
    ax.set_box_aspect((1, 1, 1))
    if title:
        ax.set_title(title)
    fig.colorbar(coll, ax=ax, shrink=0.7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
