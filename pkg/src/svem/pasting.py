"""Pasting two meshes along straight boundary seams.

Boundary vertices of the two meshes that coincide within a tolerance
are merged (coordinates averaged).  A remaining boundary vertex of one
mesh that sits strictly inside a boundary edge of the other is a
hanging node: it is spliced into the vertex cycle of the face owning
that edge, which turns quads along a 2:1 seam into degenerate
pentagons with three collinear vertices.  The result is an ordinary
conforming polygonal mesh.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .errors import InvalidParameter, SeamMismatch, ToleranceAmbiguity
from .mesh import SurfaceMesh


def default_merge_tol(a: SurfaceMesh, b: SurfaceMesh) -> float:
    both = np.vstack([a.vertices, b.vertices])
    span = both.max(axis=0) - both.min(axis=0)
    return 1e-9 * float(np.linalg.norm(span))


def paste(a: SurfaceMesh, b: SurfaceMesh, merge_tol: float | None = None) -> SurfaceMesh:
    """Glue meshes a and b along their shared straight boundary seams.

    Raises SeamMismatch when the meshes share no seam, the seam
    vertices of a component are not collinear, or the two sides do not
    span the same segment; ToleranceAmbiguity when a vertex could merge
    with more than one partner at the given tolerance.
    """
    if merge_tol is None:
        merge_tol = default_merge_tol(a, b)
    if merge_tol <= 0.0:
        raise InvalidParameter(f"merge tolerance must be positive, got {merge_tol!r}")

    a_bnd = np.flatnonzero(a.boundary_vertex_flags)
    b_bnd = np.flatnonzero(b.boundary_vertex_flags)
    if a_bnd.size == 0 or b_bnd.size == 0:
        raise SeamMismatch("one of the meshes is closed and has no seam to paste along")

    # one-to-one vertex matching within merge_tol
    tree = cKDTree(b.vertices[b_bnd])
    hits = tree.query_ball_point(a.vertices[a_bnd], r=merge_tol)
    pairs: list[tuple[int, int]] = []
    b_taken: dict[int, int] = {}
    for ia, lst in zip(a_bnd, hits):
        if len(lst) > 1:
            raise ToleranceAmbiguity(
                f"vertex {ia} of the first mesh matches {len(lst)} vertices "
                f"of the second at tolerance {merge_tol:g}"
            )
        if lst:
            jb = int(b_bnd[lst[0]])
            if jb in b_taken:
                raise ToleranceAmbiguity(
                    f"vertices {b_taken[jb]} and {ia} of the first mesh both "
                    f"match vertex {jb} of the second at tolerance {merge_tol:g}"
                )
            b_taken[jb] = int(ia)
            pairs.append((int(ia), jb))
    if not pairs:
        raise SeamMismatch("meshes share no boundary vertices within tolerance")

    # combined vertex array: a's vertices (seam coordinates averaged),
    # then b's unmerged vertices
    na = a.n_vertices
    coords = a.vertices.copy()
    for ia, jb in pairs:
        coords[ia] = 0.5 * (a.vertices[ia] + b.vertices[jb])
    b_map = np.empty(b.n_vertices, dtype=int)
    extra = [j for j in range(b.n_vertices) if j not in b_taken]
    for jb, ia in b_taken.items():
        b_map[jb] = ia
    for rank, j in enumerate(extra):
        b_map[j] = na + rank
    verts = np.vstack([coords, b.vertices[extra]])

    faces: list[tuple[int, ...]] = list(a.faces)
    faces.extend(tuple(int(b_map[v]) for v in f) for f in b.faces)

    merged_new = {ia for ia, _ in pairs}
    a_free = [int(i) for i in a_bnd if i not in merged_new]
    b_free = [int(b_map[j]) for j in b_bnd if j not in b_taken]

    # hanging nodes: unmerged boundary vertices of one mesh strictly
    # inside a boundary edge of the other
    insertions: dict[tuple[int, int, int], list[int]] = {}
    inserted: set[int] = set()

    def scan(src: SurfaceMesh, face_offset: int, id_map, cand: list[int]) -> None:
        if not cand:
            return
        pts = verts[cand]
        cand_arr = np.asarray(cand)
        for (u0, v0), uses in src.edge_faces.items():
            if len(uses) != 1:
                continue
            fk, uu, vv = uses[0]
            u, v = int(id_map[uu]), int(id_map[vv])
            pa, pb = verts[u], verts[v]
            ab = pb - pa
            length2 = float(ab @ ab)
            length = np.sqrt(length2)
            t = (pts - pa) @ ab / length2
            d = np.linalg.norm(pts - (pa + t[:, None] * ab), axis=1)
            sel = (d <= merge_tol) & (t * length > merge_tol) & ((1.0 - t) * length > merge_tol)
            if not sel.any():
                continue
            order = np.argsort(t[sel], kind="stable")
            ws = [int(w) for w in cand_arr[sel][order]]
            insertions[(face_offset + fk, u, v)] = ws
            inserted.update(ws)

    scan(a, 0, np.arange(na), b_free)
    scan(b, len(a.faces), b_map, a_free)

    new_faces: list[tuple[int, ...]] = []
    for fi, f in enumerate(faces):
        m = len(f)
        cyc: list[int] = []
        for s in range(m):
            p, q = f[s], f[(s + 1) % m]
            cyc.append(p)
            cyc.extend(insertions.get((fi, p, q), ()))
        new_faces.append(tuple(cyc))

    _audit_seam(a, b, np.arange(na), b_map, verts, merged_new, inserted, insertions, merge_tol)
    return SurfaceMesh(verts, tuple(new_faces))


def _audit_seam(a, b, a_map, b_map, verts, merged_new, inserted, insertions, tol) -> None:
    """Check each seam component is a straight segment covered by both sides."""
    seam = sorted(merged_new | inserted)
    in_seam = set(seam)
    adj: dict[int, set[int]] = {s: set() for s in seam}

    def link(u, v):
        adj[u].add(v)
        adj[v].add(u)

    for (_, u, v), ws in insertions.items():
        chain = [u, *ws, v]
        for x, y in zip(chain, chain[1:]):
            if x in in_seam and y in in_seam:
                link(x, y)
    for src, id_map in ((a, a_map), (b, b_map)):
        for (u0, v0), uses in src.edge_faces.items():
            if len(uses) == 1:
                u, v = int(id_map[u0]), int(id_map[v0])
                if u in in_seam and v in in_seam:
                    link(u, v)

    seen: set[int] = set()
    bnd_a = verts[[int(i) for i in np.flatnonzero(a.boundary_vertex_flags)]]
    bnd_b = verts[[int(b_map[j]) for j in np.flatnonzero(b.boundary_vertex_flags)]]
    for s in seam:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = [s]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        if len(comp) < 2:
            raise SeamMismatch("meshes touch at an isolated vertex, not along a seam")
        pts = verts[comp]
        diffs = pts[:, None, :] - pts[None, :, :]
        d2 = (diffs**2).sum(axis=2)
        i0, j0 = np.unravel_index(int(d2.argmax()), d2.shape)
        p0 = pts[i0]
        direction = pts[j0] - p0
        length = np.linalg.norm(direction)
        if length <= tol:
            raise SeamMismatch("seam component has no extent")
        direction = direction / length
        offsets = pts - p0
        resid = np.linalg.norm(offsets - (offsets @ direction)[:, None] * direction, axis=1)
        if resid.max() > tol:
            raise SeamMismatch(
                f"seam vertices deviate {resid.max():.3e} from a straight line "
                f"(tolerance {tol:g})"
            )
        extents = []
        for bnd in (bnd_a, bnd_b):
            off = bnd - p0
            dist = np.linalg.norm(off - (off @ direction)[:, None] * direction, axis=1)
            params = (off @ direction)[dist <= tol]
            if params.size == 0:
                raise SeamMismatch("one mesh has no boundary vertices on a seam line")
            extents.append((params.min(), params.max()))
        (lo_a, hi_a), (lo_b, hi_b) = extents
        if abs(lo_a - lo_b) > tol or abs(hi_a - hi_b) > tol:
            raise SeamMismatch(
                "seam segments do not cover the same extent: "
                f"[{lo_a:g}, {hi_a:g}] vs [{lo_b:g}, {hi_b:g}]"
            )
