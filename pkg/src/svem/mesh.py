"""Polygonal surface meshes and their per-element geometry.

A mesh stores 3d vertices and faces given as counterclockwise vertex
cycles (seen from the outward side).  Each face is flattened into its
least-squares plane before any element computation; the resulting
:class:`ElementFrame` carries the 2d geometry every later stage needs
(areas, centroids, edge normals, shape constants).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import DegenerateFace, InvalidParameter

OFF_SURFACE_TOL = 1e-10


@dataclass(frozen=True)
class SurfaceMesh:
    """Vertices (n, 3) plus faces as tuples of vertex indices."""

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise InvalidParameter("vertices must be an (n, 3) array")
        if not np.all(np.isfinite(verts)):
            raise InvalidParameter("vertex coordinates must be finite")
        faces = tuple(tuple(int(i) for i in f) for f in self.faces)
        n = len(verts)
        for k, f in enumerate(faces):
            if len(f) < 3:
                raise InvalidParameter(f"face {k} has fewer than 3 vertices")
            if len(set(f)) != len(f):
                raise InvalidParameter(f"face {k} repeats a vertex index")
            if min(f) < 0 or max(f) >= n:
                raise InvalidParameter(f"face {k} references a missing vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", faces)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def face_coords(self, k: int) -> np.ndarray:
        return self.vertices[list(self.faces[k])]

    def counts_by_size(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for f in self.faces:
            out[len(f)] = out.get(len(f), 0) + 1
        return dict(sorted(out.items()))

    @cached_property
    def edge_faces(self) -> dict[tuple[int, int], list[tuple[int, int, int]]]:
        """Map undirected edge -> [(face index, u, v)] with (u, v) as stored."""
        inc: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
        for k, f in enumerate(self.faces):
            m = len(f)
            for i in range(m):
                u, v = f[i], f[(i + 1) % m]
                inc.setdefault((min(u, v), max(u, v)), []).append((k, u, v))
        return inc

    @cached_property
    def boundary_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for e, uses in self.edge_faces.items() if len(uses) == 1)

    @cached_property
    def boundary_vertex_flags(self) -> np.ndarray:
        flags = np.zeros(self.n_vertices, dtype=bool)
        for u, v in self.boundary_edges:
            flags[u] = True
            flags[v] = True
        return flags

    @property
    def is_closed(self) -> bool:
        return len(self.boundary_edges) == 0

    def bbox_diagonal(self) -> float:
        if self.n_vertices == 0:
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(span))


@dataclass(frozen=True)
class ElementFrame:
    """Flattened geometry of one face.

    coords2d lives in the tangent basis with origin at the projected
    vertex mean; centroid2d is the area centroid in those coordinates,
    and origin is that centroid mapped back to 3d.  edge_normals are
    outward unit normals of the (counterclockwise) 2d polygon.
    """

    origin: np.ndarray
    tangent_basis: np.ndarray  # (2, 3), rows t1, t2
    normal: np.ndarray
    coords2d: np.ndarray  # (m, 2)
    centroid2d: np.ndarray
    area: float
    diameter: float
    edge_lengths: np.ndarray
    edge_normals: np.ndarray
    planarity_defect: float

    @property
    def n_vertices(self) -> int:
        return len(self.coords2d)

    def lift(self, pts2d: np.ndarray) -> np.ndarray:
        """Map 2d frame coordinates back to 3d points in the face plane."""
        pts2d = np.asarray(pts2d, dtype=float)
        base = self.origin - self.tangent_basis.T @ self.centroid2d
        return base + pts2d @ self.tangent_basis


def shoelace(coords2d: np.ndarray) -> tuple[float, np.ndarray]:
    """Signed area and area centroid of a 2d polygon."""
    p = np.asarray(coords2d, dtype=float)
    q = np.roll(p, -1, axis=0)
    cross = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
    area = 0.5 * cross.sum()
    if area == 0.0:
        return 0.0, p.mean(axis=0)
    cx = ((p[:, 0] + q[:, 0]) * cross).sum() / (6.0 * area)
    cy = ((p[:, 1] + q[:, 1]) * cross).sum() / (6.0 * area)
    return float(area), np.array([cx, cy])


def _segments_cross(a, b, c, d) -> bool:
    """Proper crossing test; collinear touching does not count."""

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    d1 = orient(c, d, a)
    d2 = orient(c, d, b)
    d3 = orient(a, b, c)
    d4 = orient(a, b, d)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def _is_simple(coords2d: np.ndarray) -> bool:
    m = len(coords2d)
    for i in range(m):
        a, b = coords2d[i], coords2d[(i + 1) % m]
        for j in range(i + 1, m):
            if j == i or (j + 1) % m == i or j == (i + 1) % m:
                continue  # shared endpoint
            c, d = coords2d[j], coords2d[(j + 1) % m]
            if _segments_cross(a, b, c, d):
                return False
    return True


def build_frame(coords: np.ndarray) -> ElementFrame:
    """Fit the face plane and assemble the 2d element geometry.

    Raises DegenerateFace for near-zero area, zero-length edges or a
    self-intersecting vertex cycle.
    """
    coords = np.asarray(coords, dtype=float)
    if coords.ndim != 2 or coords.shape[1] != 3 or len(coords) < 3:
        raise InvalidParameter("face coordinates must be an (m>=3, 3) array")
    vmean = coords.mean(axis=0)
    rel = coords - vmean
    _, _, vt = np.linalg.svd(rel, full_matrices=False)
    normal = vt[2]
    newell = np.cross(rel, np.roll(rel, -1, axis=0)).sum(axis=0)
    if normal @ newell < 0.0:
        normal = -normal
    t1 = vt[0]
    t2 = np.cross(normal, t1)
    basis = np.vstack([t1, t2])
    coords2d = rel @ basis.T

    area, centroid2d = shoelace(coords2d)
    diffs = coords2d[:, None, :] - coords2d[None, :, :]
    diameter = float(np.sqrt((diffs**2).sum(axis=2).max()))
    if diameter == 0.0 or area <= 1e-14 * diameter**2:
        raise DegenerateFace(f"face area {area:.3e} is degenerate")
    if not _is_simple(coords2d):
        raise DegenerateFace("face polygon is self-intersecting")

    edges = np.roll(coords2d, -1, axis=0) - coords2d
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if lengths.min() <= 1e-14 * diameter:
        raise DegenerateFace("face has a zero-length edge")
    # outward normal of a CCW polygon edge (dx, dy) is (dy, -dx)
    normals2d = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
    defect = float(np.abs(rel @ normal).max())
    origin = vmean + basis.T @ centroid2d
    return ElementFrame(
        origin=origin,
        tangent_basis=basis,
        normal=normal,
        coords2d=coords2d,
        centroid2d=centroid2d,
        area=area,
        diameter=diameter,
        edge_lengths=lengths,
        edge_normals=normals2d,
        planarity_defect=defect,
    )


def frames(mesh: SurfaceMesh) -> list[ElementFrame]:
    return [build_frame(mesh.face_coords(k)) for k in range(mesh.n_faces)]


def kernel_radius(coords2d: np.ndarray) -> float:
    """Radius of the largest disk whose every point sees all of the polygon.

    The star-shape kernel is the intersection of the inner half-planes
    of the (counterclockwise) edges, so the largest inscribed disk
    solves a tiny linear program: maximize r subject to
    dist(x, edge line_i) >= r.  A bounded optimum is attained at a
    point where three constraints are active, so enumerating line
    triples is exact.  Returns a value <= 0 when the kernel is empty.
    """
    p = np.asarray(coords2d, dtype=float)
    q = np.roll(p, -1, axis=0)
    e = q - p
    lens = np.hypot(e[:, 0], e[:, 1])
    n_in = np.column_stack([-e[:, 1], e[:, 0]]) / lens[:, None]
    c = -(n_in * p).sum(axis=1)
    m = len(p)
    trips = np.array(list(combinations(range(m), 3)))
    A = np.empty((len(trips), 3, 3))
    A[:, :, :2] = n_in[trips]
    A[:, :, 2] = -1.0
    rhs = -c[trips]
    dets = np.linalg.det(A)
    ok = np.abs(dets) > 1e-12
    if not np.any(ok):
        return -np.inf
    sols = np.linalg.solve(A[ok], rhs[ok][..., None])[..., 0]  # columns x, y, r
    feas = (sols[:, :2] @ n_in.T + c).min(axis=1)
    return float(feas.max())


@dataclass(frozen=True)
class RegularityReport:
    """Mesh-wide shape constants and sizes."""

    gamma1: float  # min over faces of kernel radius / diameter
    gamma2: float  # min over faces of min vertex spacing / diameter
    h: float  # max face diameter
    max_planarity_defect_ratio: float  # max defect / diameter^2
    n_elements: int
    n_vertices: int
    empty_kernel_faces: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "h": self.h,
            "max_planarity_defect_ratio": self.max_planarity_defect_ratio,
            "n_elements": self.n_elements,
            "n_vertices": self.n_vertices,
            "empty_kernel_faces": list(self.empty_kernel_faces),
        }


def regularity(mesh: SurfaceMesh) -> RegularityReport:
    """Shape constants of the mesh; empty kernels give gamma1 = 0."""
    g1 = np.inf
    g2 = np.inf
    h = 0.0
    defect_ratio = 0.0
    empty: list[int] = []
    for k in range(mesh.n_faces):
        fr = build_frame(mesh.face_coords(k))
        h = max(h, fr.diameter)
        defect_ratio = max(defect_ratio, fr.planarity_defect / fr.diameter**2)
        rho = kernel_radius(fr.coords2d)
        if rho <= 0.0:
            empty.append(k)
            g1 = 0.0
        else:
            g1 = min(g1, rho / fr.diameter)
        d = fr.coords2d[:, None, :] - fr.coords2d[None, :, :]
        dist = np.sqrt((d**2).sum(axis=2))
        np.fill_diagonal(dist, np.inf)
        g2 = min(g2, dist.min() / fr.diameter)
    return RegularityReport(
        gamma1=float(g1),
        gamma2=float(g2),
        h=float(h),
        max_planarity_defect_ratio=float(defect_ratio),
        n_elements=mesh.n_faces,
        n_vertices=mesh.n_vertices,
        empty_kernel_faces=tuple(empty),
    )


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    face: int | None = None
    vertex: int | None = None


def _point_segment_param(w, a, b):
    """Parameter t of the projection of w on segment ab and the distance."""
    ab = b - a
    denom = ab @ ab
    t = float((w - a) @ ab / denom)
    closest = a + t * ab
    return t, float(np.linalg.norm(w - closest))


def validate(mesh: SurfaceMesh, surface=None) -> list[Diagnostic]:
    """Audit mesh integrity; an empty list means the mesh is valid.

    Checks face geometry (degenerate or self-intersecting faces), edge
    manifoldness (every edge in at most two faces, interior edges
    traversed once in each direction), hanging vertices sitting inside
    a boundary edge, and, when a surface is given, that every vertex
    lies on it to within OFF_SURFACE_TOL.
    """
    diags: list[Diagnostic] = []
    for k in range(mesh.n_faces):
        try:
            build_frame(mesh.face_coords(k))
        except DegenerateFace as exc:
            diags.append(Diagnostic("degenerate_face", str(exc), face=k))

    for (u, v), uses in mesh.edge_faces.items():
        if len(uses) > 2:
            diags.append(
                Diagnostic(
                    "non_manifold_edge",
                    f"edge ({u}, {v}) is shared by {len(uses)} faces",
                )
            )
        elif len(uses) == 2 and uses[0][1:] == uses[1][1:]:
            diags.append(
                Diagnostic(
                    "inconsistent_orientation",
                    f"edge ({u}, {v}) is traversed twice in the same direction",
                )
            )

    # a boundary vertex lying strictly inside another boundary edge is a
    # hanging node that was never stitched into the coarse face
    tol = 1e-9 * max(mesh.bbox_diagonal(), 1e-300)
    bverts = np.flatnonzero(mesh.boundary_vertex_flags)
    for u, v in mesh.boundary_edges:
        a, b = mesh.vertices[u], mesh.vertices[v]
        for w in bverts:
            if w == u or w == v:
                continue
            t, dist = _point_segment_param(mesh.vertices[w], a, b)
            if dist <= tol and 0.0 < t < 1.0:
                diags.append(
                    Diagnostic(
                        "non_manifold_edge",
                        f"vertex {w} hangs inside boundary edge ({u}, {v})",
                        vertex=int(w),
                    )
                )

    if surface is not None:
        d = np.abs(surface.signed_distance(mesh.vertices))
        for idx in np.flatnonzero(d > OFF_SURFACE_TOL):
            diags.append(
                Diagnostic(
                    "off_surface_vertex",
                    f"vertex {idx} is {d[idx]:.3e} away from the surface",
                    vertex=int(idx),
                )
            )
    return diags


def write_off(mesh: SurfaceMesh, path) -> None:
    """Write the mesh in OFF format with full-precision coordinates."""
    lines = ["OFF", f"{mesh.n_vertices} {mesh.n_faces} 0"]
    for x, y, z in mesh.vertices:
        lines.append(f"{float(x)!r} {float(y)!r} {float(z)!r}")
    for f in mesh.faces:
        lines.append(" ".join([str(len(f)), *map(str, f)]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_off(path) -> SurfaceMesh:
    """Read an OFF file; '#' starts a comment, blank lines are skipped."""
    tokens: list[str] = []
    with open(path) as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body:
                tokens.extend(body.split())
    if not tokens or tokens[0].upper() != "OFF":
        raise InvalidParameter(f"{path}: not an OFF file")
    it = iter(tokens[1:])
    try:
        nv, nf, _ = int(next(it)), int(next(it)), int(next(it))
        verts = np.array(
            [[float(next(it)) for _ in range(3)] for _ in range(nv)]
        ).reshape(nv, 3)
        faces = []
        for _ in range(nf):
            m = int(next(it))
            faces.append(tuple(int(next(it)) for _ in range(m)))
    except (StopIteration, ValueError) as exc:
        raise InvalidParameter(f"{path}: truncated or malformed OFF file") from exc
    return SurfaceMesh(verts, tuple(faces))
