"""Local virtual element operators of lowest order on one polygon.

Each face carries the space of functions that are harmonic inside the
polygon and piecewise linear along the boundary; the degrees of
freedom are the vertex values.  Those functions are never evaluated:
every quantity below is computed from their energy projection onto the
scaled affine monomials

    m1 = 1,  m2 = (x - x_E)/h_E,  m3 = (y - y_E)/h_E,

where (x_E, y_E) is the area centroid and h_E the diameter of the face
in its local 2d frame.

The projection of a basis function phi_i is defined by
    integral grad(proj phi_i) . grad(m)  =  integral grad(phi_i) . grad(m)
for every monomial m, pinned by matching the vertex averages.  Because
the monomial gradients are constant, the right-hand side reduces to a
boundary integral that the trapezoid rule evaluates exactly on the
piecewise linear boundary trace: vertex i contributes with the weight
(|e_prev| n_prev + |e_next| n_next) / 2 built from its two incident
edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularLocalSystem
from .mesh import ElementFrame


@dataclass(frozen=True)
class LocalVem:
    """Projection matrices of one element.

    proj_coeffs maps vertex values to the three monomial coefficients
    of the projection; proj_dofs = D proj_coeffs maps vertex values to
    the vertex values of the projection.  D holds the monomials
    evaluated at the vertices, G = B D the projector Gram matrix.
    """

    frame: ElementFrame
    D: np.ndarray  # (m, 3)
    B: np.ndarray  # (3, m)
    G: np.ndarray  # (3, 3)
    proj_coeffs: np.ndarray  # (3, m)
    proj_dofs: np.ndarray  # (m, m)


def projector(frame: ElementFrame) -> LocalVem:
    """Energy projection onto affine functions for one face."""
    p = frame.coords2d
    m = len(p)
    h = frame.diameter
    xe, ye = frame.centroid2d

    D = np.column_stack(
        [np.ones(m), (p[:, 0] - xe) / h, (p[:, 1] - ye) / h]
    )

    # trapezoid weights: w_i = (|e_{i-1}| n_{i-1} + |e_i| n_i) / 2, where
    # |e| n is the unnormalized outward edge normal (dy, -dx)
    edges = np.roll(p, -1, axis=0) - p
    scaled = np.column_stack([edges[:, 1], -edges[:, 0]])
    w = 0.5 * (scaled + np.roll(scaled, 1, axis=0))

    B = np.empty((3, m))
    B[0] = 1.0 / m  # vertex average pins the constant part
    B[1] = w[:, 0] / h
    B[2] = w[:, 1] / h

    G = B @ D
    try:
        proj_coeffs = np.linalg.solve(G, B)
    except np.linalg.LinAlgError as exc:
        raise SingularLocalSystem(
            f"projector system is singular on a face with {m} vertices"
        ) from exc
    proj_dofs = D @ proj_coeffs
    return LocalVem(
        frame=frame, D=D, B=B, G=G, proj_coeffs=proj_coeffs, proj_dofs=proj_dofs
    )


def local_stiffness(vem: LocalVem) -> np.ndarray:
    """Element stiffness: exact energy of the projections plus the
    Euclidean dof product of the projection remainders.

    The gradient of each projection is constant, so the consistency
    part is area * grad(proj phi_i) . grad(proj phi_j), taken from the
    Gram matrix with its constant row removed.
    """
    Gt = vem.G.copy()
    Gt[0] = 0.0
    consistency = vem.proj_coeffs.T @ Gt @ vem.proj_coeffs
    r = np.eye(vem.proj_dofs.shape[0]) - vem.proj_dofs
    return consistency + r.T @ r


def monomial_mass(frame: ElementFrame) -> np.ndarray:
    """Exact integrals H[a, b] = integral_E m_a m_b via the shoelace
    moment formulas for a polygon (Gauss-Green boundary reduction)."""
    h = frame.diameter
    q = (frame.coords2d - frame.centroid2d) / h
    r = np.roll(q, -1, axis=0)
    cross = q[:, 0] * r[:, 1] - r[:, 0] * q[:, 1]
    i00 = 0.5 * cross.sum()
    i10 = ((q[:, 0] + r[:, 0]) * cross).sum() / 6.0
    i01 = ((q[:, 1] + r[:, 1]) * cross).sum() / 6.0
    i20 = ((q[:, 0] ** 2 + q[:, 0] * r[:, 0] + r[:, 0] ** 2) * cross).sum() / 12.0
    i02 = ((q[:, 1] ** 2 + q[:, 1] * r[:, 1] + r[:, 1] ** 2) * cross).sum() / 12.0
    i11 = (
        (
            q[:, 0] * r[:, 1]
            + 2.0 * q[:, 0] * q[:, 1]
            + 2.0 * r[:, 0] * r[:, 1]
            + r[:, 0] * q[:, 1]
        )
        * cross
    ).sum() / 24.0
    H = np.array([[i00, i10, i01], [i10, i20, i11], [i01, i11, i02]])
    return h * h * H


def local_mass(vem: LocalVem) -> np.ndarray:
    """Element mass: exact product of the projections plus an
    area-scaled Euclidean dof product of the projection remainders."""
    H = monomial_mass(vem.frame)
    consistency = vem.proj_coeffs.T @ H @ vem.proj_coeffs
    r = np.eye(vem.proj_dofs.shape[0]) - vem.proj_dofs
    return consistency + vem.frame.area * (r.T @ r)
