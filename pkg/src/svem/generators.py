"""Generators for the benchmark mesh families.

sphere_hybrid builds polygonal approximations of the unit sphere made
of triangles and hexagons: the icosahedron is midpoint-subdivided
`level` times (new vertices pushed onto the sphere), then the
six-triangle fan around every interior lattice vertex with even
barycentric indices is merged into a hexagon.

cylinder_half builds structured quad meshes of the two halves of the
unit cylinder 0 <= z <= 2 used by the pasting benchmark: half 1 covers
angles [0, pi] with an (4n x 2n) grid, half 2 covers [pi, 2*pi] with a
coarser (2n x n) grid, so the seams at y = 0 meet nonconformingly.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameter
from .mesh import SurfaceMesh


def icosahedron() -> SurfaceMesh:
    """Regular icosahedron inscribed in the unit sphere, outward faces."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts[0])
    faces = (
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    )
    return SurfaceMesh(verts, faces)


def _face_lattice(A, B, C, level: int) -> dict[tuple[int, int], np.ndarray]:
    """Barycentric lattice of one icosahedron face after `level` rounds
    of midpoint subdivision with projection to the unit sphere.

    Index (i, j) runs over i + j <= 2**level with (0,0) -> A,
    (n,0) -> B, (0,n) -> C.
    """
    P = {(0, 0): np.asarray(A), (1, 0): np.asarray(B), (0, 1): np.asarray(C)}
    m = 1
    for _ in range(level):
        Q = {(2 * i, 2 * j): pos for (i, j), pos in P.items()}

        def mid(p, q):
            s = p + q
            return s / np.linalg.norm(s)

        for i in range(m):
            for j in range(m - i):
                Q[(2 * i + 1, 2 * j)] = mid(P[(i, j)], P[(i + 1, j)])
                Q[(2 * i, 2 * j + 1)] = mid(P[(i, j)], P[(i, j + 1)])
                Q[(2 * i + 1, 2 * j + 1)] = mid(P[(i + 1, j)], P[(i, j + 1)])
        P = Q
        m *= 2
    return P


def sphere_hybrid(level: int) -> SurfaceMesh:
    """Triangle/hexagon mesh of the unit sphere at the given refinement.

    Level 0 is the plain icosahedron.  Hexagons appear once the lattice
    is fine enough to contain interior vertices with all-even indices
    (level >= 3).
    """
    if not isinstance(level, (int, np.integer)) or level < 0:
        raise InvalidParameter(f"sphere level must be a nonnegative integer, got {level!r}")
    ico = icosahedron()
    n = 2**level

    positions: list[np.ndarray] = []
    index: dict[tuple, int] = {}

    def register(key, pos) -> int:
        gid = index.get(key)
        if gid is None:
            gid = len(positions)
            index[key] = gid
            positions.append(pos)
        return gid

    def edge_key(va: int, vb: int, t: int):
        # parameter t counts from the lower vertex id so both adjacent
        # macro faces agree on the key
        if va < vb:
            return ("e", va, vb, t)
        return ("e", vb, va, n - t)

    all_faces: list[tuple[int, ...]] = []
    for fidx, (a, b, c) in enumerate(ico.faces):
        lat = _face_lattice(ico.vertices[a], ico.vertices[b], ico.vertices[c], level)
        gid: dict[tuple[int, int], int] = {}
        for (i, j), pos in sorted(lat.items()):
            k = n - i - j
            if (i, j) == (0, 0):
                key = ("v", a)
            elif (i, j) == (n, 0):
                key = ("v", b)
            elif (i, j) == (0, n):
                key = ("v", c)
            elif j == 0:
                key = edge_key(a, b, i)
            elif i == 0:
                key = edge_key(a, c, j)
            elif k == 0:
                key = edge_key(b, c, j)
            else:
                key = ("f", fidx, i, j)
            gid[(i, j)] = register(key, pos)

        centers = [
            (i, j)
            for i in range(2, n - 1, 2)
            for j in range(2, n - i, 2)
            if (n - i - j) % 2 == 0 and n - i - j >= 1
        ]
        removed: set[tuple[str, int, int]] = set()
        for i, j in centers:
            removed.update(
                {
                    ("up", i, j), ("up", i - 1, j), ("up", i, j - 1),
                    ("down", i - 1, j), ("down", i - 1, j - 1), ("down", i, j - 1),
                }
            )
        for i in range(n):
            for j in range(n - i):
                if ("up", i, j) not in removed:
                    all_faces.append((gid[(i, j)], gid[(i + 1, j)], gid[(i, j + 1)]))
                if i + j <= n - 2 and ("down", i, j) not in removed:
                    all_faces.append(
                        (gid[(i + 1, j)], gid[(i + 1, j + 1)], gid[(i, j + 1)])
                    )
        for i, j in centers:
            ring = [(i + 1, j), (i, j + 1), (i - 1, j + 1), (i - 1, j), (i, j - 1), (i + 1, j - 1)]
            all_faces.append(tuple(gid[idx] for idx in ring))

    # drop the swallowed fan centers and renumber
    used = sorted({v for f in all_faces for v in f})
    remap = {old: new for new, old in enumerate(used)}
    verts = np.array([positions[old] for old in used])
    faces = tuple(tuple(remap[v] for v in f) for f in all_faces)
    return SurfaceMesh(verts, faces)


def cylinder_half(which: int, n: int) -> SurfaceMesh:
    """Structured quad mesh of one half of the cylinder x^2+y^2=1, 0<=z<=2.

    which = 1: angles [0, pi],   (4n x 2n) grid of quads,
    which = 2: angles [pi, 2pi], (2n x n) grid of quads.
    """
    if n < 1 or not isinstance(n, (int, np.integer)):
        raise InvalidParameter(f"cylinder mesh parameter n must be a positive integer, got {n!r}")
    if which == 1:
        ni, nj = 4 * n, 2 * n
        theta = np.pi * np.arange(ni + 1) / (4 * n)
        z = np.arange(nj + 1) / n
    elif which == 2:
        ni, nj = 2 * n, n
        theta = np.pi * (np.arange(ni + 1) + 2 * n) / (2 * n)
        z = 2 * np.arange(nj + 1) / n
    else:
        raise InvalidParameter(f"cylinder half must be 1 or 2, got {which!r}")

    tt, zz = np.meshgrid(theta, z)  # shape (nj+1, ni+1), j-major rows
    verts = np.column_stack([np.cos(tt).ravel(), np.sin(tt).ravel(), zz.ravel()])

    def vid(i, j):
        return j * (ni + 1) + i

    faces = tuple(
        (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1))
        for j in range(nj)
        for i in range(ni)
    )
    return SurfaceMesh(verts, faces)
