"""Global assembly and solution of the discrete Laplace-Beltrami system.

The element loop scatters local stiffness and mass matrices into
sparse global ones.  The load vector follows the lumped construction
that matches the lowest-order dof structure: the discrete right-hand
side integral of f against a basis function phi_i is approximated by

    b_i = sum over elements E containing i of  (1/n_E) integral_E f_h,

with integral_E f_h evaluated through the local mass matrix row sums.
On closed surfaces f is first shifted by its discrete mean so that the
load is exactly compatible with the singular Neumann-type operator;
the resulting system is closed by replacing the last row with the
discrete mean constraint ones^T M xi = 0.  On surfaces with boundary
the exact solution values are imposed as Dirichlet data instead.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConstraintMismatch, SingularSystem
from .mesh import SurfaceMesh, build_frame
from .surface import BenchmarkProblem
from .vem import local_mass, local_stiffness, projector

RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class ZeroMeanConstraint:
    """Closed-surface closure: replace one equation by ones^T M xi = 0."""

    kind: str = field(default="zero_mean", init=False)


@dataclass(frozen=True)
class DirichletConstraint:
    """Boundary closure: pin the listed dofs to the given values."""

    fixed: np.ndarray
    values: np.ndarray
    kind: str = field(default="dirichlet", init=False)


@dataclass
class DiscreteSystem:
    """Assembled matrices, load and (after solve) the solution."""

    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    load: np.ndarray
    constraint: ZeroMeanConstraint | DirichletConstraint
    solution: np.ndarray | None = None

    @property
    def n_dofs(self) -> int:
        return self.stiffness.shape[0]


def _local_matrices(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    vem = projector(build_frame(coords))
    return local_stiffness(vem), local_mass(vem)


def assemble(
    mesh: SurfaceMesh, problem: BenchmarkProblem, threads: int = 1
) -> DiscreteSystem:
    """Assemble stiffness, mass and load for the given problem.

    The element loop may run on a thread pool; results are merged in
    element order, so the assembled matrices do not depend on the
    thread count.
    """
    closed = mesh.is_closed
    if problem.zero_mean_constrained and not closed:
        raise ConstraintMismatch(
            "zero-mean constrained problem needs a closed mesh, "
            "but the mesh has a boundary"
        )
    if not problem.zero_mean_constrained:
        if problem.boundary_data is None:
            raise ConstraintMismatch("problem defines neither boundary data nor a zero-mean constraint")
        if closed:
            raise ConstraintMismatch(
                "Dirichlet problem needs a mesh with boundary, but the mesh is closed"
            )

    n = mesh.n_vertices
    face_ids = [np.asarray(f, dtype=int) for f in mesh.faces]
    coords_list = [mesh.vertices[ids] for ids in face_ids]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            locals_ = list(pool.map(_local_matrices, coords_list))
    else:
        locals_ = [_local_matrices(c) for c in coords_list]

    size = sum(len(f) ** 2 for f in face_ids)
    rows = np.empty(size, dtype=int)
    cols = np.empty(size, dtype=int)
    k_vals = np.empty(size)
    m_vals = np.empty(size)
    pos = 0
    mass_row_sums = []
    for ids, (K, M) in zip(face_ids, locals_):
        m = len(ids)
        block = m * m
        rr = np.repeat(ids, m)
        rows[pos : pos + block] = rr
        cols[pos : pos + block] = np.tile(ids, m)
        k_vals[pos : pos + block] = K.ravel()
        m_vals[pos : pos + block] = M.ravel()
        pos += block
        mass_row_sums.append(M.sum(axis=1))

    A = sp.coo_matrix((k_vals, (rows, cols)), shape=(n, n)).tocsr()
    Mg = sp.coo_matrix((m_vals, (rows, cols)), shape=(n, n)).tocsr()

    f_vals = np.asarray(problem.load_f(mesh.vertices), dtype=float)
    if problem.zero_mean_constrained:
        # shift f by its discrete mean so the compatible system has an
        # exactly consistent right-hand side
        row_sums = np.asarray(Mg.sum(axis=1)).ravel()
        total = row_sums.sum()
        f_vals = f_vals - (row_sums @ f_vals) / total

    b = np.zeros(n)
    for ids, mrs in zip(face_ids, mass_row_sums):
        integral = mrs @ f_vals[ids]
        b[ids] += integral / len(ids)

    if problem.zero_mean_constrained:
        constraint = ZeroMeanConstraint()
    else:
        fixed = np.flatnonzero(mesh.boundary_vertex_flags)
        values = np.asarray(problem.boundary_data(mesh.vertices[fixed]), dtype=float)
        constraint = DirichletConstraint(fixed=fixed, values=values)
    return DiscreteSystem(stiffness=A, mass=Mg, load=b, constraint=constraint)


def _spsolve(S: sp.csr_matrix, rhs: np.ndarray) -> np.ndarray:
    try:
        lu = spla.splu(S.tocsc())
    except RuntimeError as exc:
        raise SingularSystem(f"sparse factorization failed: {exc}") from exc
    pivots = np.abs(lu.U.diagonal())
    if pivots.min() <= 1e-13 * pivots.max():
        raise SingularSystem(
            "constrained matrix is rank deficient "
            f"(pivot ratio {pivots.min() / pivots.max():.3e})"
        )
    x = lu.solve(rhs)
    if not np.all(np.isfinite(x)):
        raise SingularSystem("sparse factorization produced non-finite values")
    return x


def _check_residual(S, x, rhs, scale) -> None:
    res = float(np.linalg.norm(S @ x - rhs))
    if res > RESIDUAL_TOL * scale:
        raise SingularSystem(
            f"solution residual {res:.3e} exceeds {RESIDUAL_TOL:g} * {scale:.3e}"
        )


def solve(system: DiscreteSystem, method: str = "direct") -> np.ndarray:
    """Solve the constrained system and store the solution.

    method 'direct' uses a sparse LU factorization.  method
    'iterative' uses conjugate gradients on the Dirichlet-reduced
    system and MINRES on the symmetric saddle-point form of the
    zero-mean constrained system.
    """
    A, b = system.stiffness, system.load
    n = A.shape[0]
    norm_a = spla.norm(A, np.inf)
    con = system.constraint

    if isinstance(con, ZeroMeanConstraint):
        mass_col = np.asarray(system.mass.sum(axis=0)).ravel()
        if method == "direct":
            S = sp.vstack(
                [A[:-1], sp.csr_matrix(mass_col[None, :])], format="csr"
            )
            rhs = np.concatenate([b[:-1], [0.0]])
            x = _spsolve(S, rhs)
        elif method == "iterative":
            # saddle-point form [[A, c], [c^T, 0]] stays symmetric
            c = sp.csr_matrix(mass_col[:, None])
            S = sp.bmat([[A, c], [c.T, None]], format="csr")
            rhs = np.concatenate([b, [0.0]])
            xa, info = spla.minres(S, rhs, rtol=1e-12, maxiter=50 * n)
            if info != 0:
                raise SingularSystem(f"minres did not converge (info={info})")
            x = xa[:n]
            S = sp.vstack([A[:-1], sp.csr_matrix(mass_col[None, :])], format="csr")
            rhs = np.concatenate([b[:-1], [0.0]])
        else:
            raise ValueError(f"unknown solve method {method!r}")
        scale = norm_a * np.linalg.norm(x) + np.linalg.norm(b)
        _check_residual(S, x, rhs, scale)
    else:
        fixed = con.fixed
        free = np.setdiff1d(np.arange(n), fixed)
        Aff = A[free][:, free].tocsc()
        rhs = b[free] - A[free][:, fixed] @ con.values
        if method == "direct":
            xf = _spsolve(Aff, rhs)
        elif method == "iterative":
            xf, info = spla.cg(Aff, rhs, rtol=1e-12, maxiter=50 * n)
            if info != 0:
                raise SingularSystem(f"cg did not converge (info={info})")
        else:
            raise ValueError(f"unknown solve method {method!r}")
        scale = norm_a * np.linalg.norm(xf) + np.linalg.norm(rhs)
        _check_residual(Aff, xf, rhs, scale)
        x = np.empty(n)
        x[free] = xf
        x[fixed] = con.values

    system.solution = x
    return x


def dump_system(system: DiscreteSystem, directory) -> None:
    """Write A and M in Matrix Market format plus plain-text vectors."""
    import os

    os.makedirs(directory, exist_ok=True)
    scipy.io.mmwrite(os.path.join(directory, "A.mtx"), system.stiffness.tocoo())
    scipy.io.mmwrite(os.path.join(directory, "M.mtx"), system.mass.tocoo())

    def write_vec(name, vec):
        with open(os.path.join(directory, name), "w") as fh:
            fh.write("\n".join(repr(float(v)) for v in vec) + "\n")

    write_vec("b.txt", system.load)
    if system.solution is not None:
        write_vec("xi.txt", system.solution)
