"""Shared fixtures: small flat meshes and ad hoc problems."""

from __future__ import annotations

import numpy as np

from svem import BenchmarkProblem, SurfaceMesh


def grid_mesh(nx, ny, x0=0.0, y0=0.0, dx=1.0, dy=1.0, z=0.0) -> SurfaceMesh:
    """Flat nx-by-ny grid of axis-aligned quads in the plane z=const."""
    xs = x0 + dx * np.arange(nx + 1)
    ys = y0 + dy * np.arange(ny + 1)
    verts = np.array([[x, y, z] for x in xs for y in ys])
    vid = lambda i, j: i * (ny + 1) + j
    faces = tuple(
        (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
        for i in range(nx)
        for j in range(ny)
    )
    return SurfaceMesh(vertices=verts, faces=faces)


def affine_problem(a=0.3, b=-1.2, c=0.7) -> BenchmarkProblem:
    """Dirichlet problem whose exact solution is a + b*x + c*y, f = 0."""
    u = lambda p: a + b * p[..., 0] + c * p[..., 1]
    zero = lambda p: np.zeros(p.shape[:-1])
    return BenchmarkProblem(
        name="affine-patch",
        surface=None,
        exact_u=u,
        load_f=zero,
        boundary_data=u,
        zero_mean_constrained=False,
    )


def regular_polygon(m: int, radius: float = 1.0, z: float = 0.0) -> np.ndarray:
    """Vertices of a regular m-gon in the z=const plane."""
    ang = 2.0 * np.pi * np.arange(m) / m
    return np.column_stack([radius * np.cos(ang), radius * np.sin(ang), np.full(m, z)])


def degenerate_pentagon() -> np.ndarray:
    """Unit square with a hanging vertex at the midpoint of one edge.

    Three consecutive vertices are collinear, the shape produced by
    pasting a half-size neighbor along the right edge.
    """
    return np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.5, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
        ]
    )


def rigid_motion(coords: np.ndarray, seed: int = 0) -> np.ndarray:
    """Apply a random rotation plus translation to (m, 3) coordinates."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return coords @ q.T + rng.standard_normal(3)
