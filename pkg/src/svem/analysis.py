"""Error measurement, convergence rates and geometric accuracy probes.

Errors compare the solved coefficient vector against the vertex
interpolant of the exact solution in the discrete norms induced by the
assembled matrices:

    err_l2   = sqrt(delta^T M delta)
    err_h1   = sqrt(delta^T A delta)
    err_linf = max |delta_i|        with delta = u_I - xi.

Note the square roots and the absolute value: the raw bilinear forms
are reported as norms.  Orders of convergence come in two flavours,
pairwise EOC between consecutive refinements and a least-squares slope
of log(err) against log(h) over the whole family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import generators, pasting
from .assembly import DiscreteSystem, assemble, solve
from .errors import SvemError
from .mesh import SurfaceMesh, build_frame
from .surface import BenchmarkProblem, benchmark


@dataclass
class ErrorRecord:
    level: int
    h: float
    n_dofs: int
    err_l2: float
    err_linf: float
    err_h1: float
    eoc_l2: float | None = None
    eoc_linf: float | None = None
    eoc_h1: float | None = None


def interpolate(mesh: SurfaceMesh, problem: BenchmarkProblem) -> np.ndarray:
    """Vertex interpolant of the exact solution."""
    return np.asarray(problem.exact_u(mesh.vertices), dtype=float)


def errors(
    system: DiscreteSystem,
    mesh: SurfaceMesh,
    problem: BenchmarkProblem,
    level: int = 0,
    h: float | None = None,
) -> ErrorRecord:
    """Discrete error norms of the stored solution.

    h defaults to the measured mesh size (max face diameter); callers
    studying a structured family may pass its nominal size instead.
    """
    if system.solution is None:
        raise ValueError("system has no solution; call solve() first")
    delta = interpolate(mesh, problem) - system.solution
    err_l2 = float(np.sqrt(abs(delta @ (system.mass @ delta))))
    err_h1 = float(np.sqrt(abs(delta @ (system.stiffness @ delta))))
    err_linf = float(np.abs(delta).max())
    if h is None:
        h = max(build_frame(mesh.face_coords(k)).diameter for k in range(mesh.n_faces))
    return ErrorRecord(
        level=level,
        h=float(h),
        n_dofs=mesh.n_vertices,
        err_l2=err_l2,
        err_linf=err_linf,
        err_h1=err_h1,
    )


def attach_eoc(records: list[ErrorRecord]) -> list[ErrorRecord]:
    """Fill pairwise orders log(e_prev/e_cur) / log(h_prev/h_cur)."""
    for prev, cur in zip(records, records[1:]):
        ratio = np.log(prev.h / cur.h)
        cur.eoc_l2 = float(np.log(prev.err_l2 / cur.err_l2) / ratio)
        cur.eoc_linf = float(np.log(prev.err_linf / cur.err_linf) / ratio)
        cur.eoc_h1 = float(np.log(prev.err_h1 / cur.err_h1) / ratio)
    return records


def fit_slope(hs, errs) -> float:
    """Least-squares slope of log(err) against log(h)."""
    return float(np.polyfit(np.log(np.asarray(hs)), np.log(np.asarray(errs)), 1)[0])


def slopes(records: list[ErrorRecord]) -> dict[str, float]:
    hs = [r.h for r in records]
    return {
        "slope_l2": fit_slope(hs, [r.err_l2 for r in records]),
        "slope_linf": fit_slope(hs, [r.err_linf for r in records]),
        "slope_h1": fit_slope(hs, [r.err_h1 for r in records]),
    }


def _face_samples(coords: np.ndarray, samples_per_face: int) -> np.ndarray:
    """Interior sample points of one (possibly non-planar) face.

    The face is fanned from its vertex centroid; each fan triangle is
    sampled on the interior barycentric lattice of the smallest order
    that reaches the requested count.  The centroid itself is included.
    """
    m = len(coords)
    c = coords.mean(axis=0)
    q = 3
    while m * (q - 1) * (q - 2) // 2 + 1 < samples_per_face:
        q += 1
    bary = [
        (i / q, j / q, (q - i - j) / q)
        for i in range(1, q)
        for j in range(1, q - i)
    ]
    pts = [c]
    for s in range(m):
        v1, v2 = coords[s], coords[(s + 1) % m]
        for a, b, g in bary:
            pts.append(a * c + b * v1 + g * v2)
    return np.array(pts)


def geometric_probe(mesh: SurfaceMesh, surface, samples_per_face: int = 15) -> float:
    """Largest sampled distance between the mesh and the surface."""
    worst = 0.0
    for k in range(mesh.n_faces):
        pts = _face_samples(mesh.face_coords(k), samples_per_face)
        worst = max(worst, float(np.abs(surface.signed_distance(pts)).max()))
    return worst


def run_sphere_convergence(
    levels, threads: int = 1, method: str = "direct", on_record=None
) -> tuple[list[ErrorRecord], dict[str, float]]:
    """Solve the sphere benchmark over a refinement-level family.

    on_record, if given, is called with the records accumulated so far
    after each level completes, so callers can checkpoint partial runs.
    A failure at one level is re-raised with that level in the message.
    """
    problem = benchmark("sphere-xy")
    records = []
    for level in levels:
        try:
            mesh = generators.sphere_hybrid(level)
            system = assemble(mesh, problem, threads=threads)
            solve(system, method=method)
        except SvemError as exc:
            raise type(exc)(f"level {level}: {exc}") from exc
        records.append(errors(system, mesh, problem, level=level))
        attach_eoc(records)
        if on_record is not None:
            on_record(records)
    return records, slopes(records)


def run_cylinder_convergence(
    ns, threads: int = 1, method: str = "direct", on_record=None
) -> tuple[list[ErrorRecord], dict[str, float]]:
    """Solve the pasted-cylinder benchmark over a family of grid sizes n.

    The reported mesh size is the family's nominal chord length
    2 sin(pi / (8 n)) of the finer half, not the measured maximum
    element diameter.  on_record behaves as in run_sphere_convergence.
    """
    problem = benchmark("cylinder-exp")
    records = []
    for n in ns:
        try:
            mesh = pasting.paste(
                generators.cylinder_half(1, n), generators.cylinder_half(2, n)
            )
            system = assemble(mesh, problem, threads=threads)
            solve(system, method=method)
        except SvemError as exc:
            raise type(exc)(f"n={n}: {exc}") from exc
        records.append(
            errors(system, mesh, problem, level=n, h=2.0 * np.sin(np.pi / (8 * n)))
        )
        attach_eoc(records)
        if on_record is not None:
            on_record(records)
    return records, slopes(records)
