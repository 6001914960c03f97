"""Compact convex bodies in 3-space: hull-built polytopes and analytic balls.

Most routines accept stacked inputs (leading sample axis) so Monte Carlo code can
call them on whole chunks; the scalar forms are thin wrappers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Union

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateInput, LineMeetsBody, NonUnitDirection, PointInside

REL_EPS = 1e-9
UNIT_TOL = 1e-12


def perp_basis(u):
    """Orthonormal ``(e1, e2)`` spanning ``u``-perp with ``e1 x e2 = u``; works on stacks."""
    u = np.asarray(u, dtype=float)
    helper = np.zeros_like(u)
    use_x = np.abs(u[..., 2]) > 0.9
    helper[..., 2] = np.where(use_x, 0.0, 1.0)
    helper[..., 0] = np.where(use_x, 1.0, 0.0)
    e1 = np.cross(helper, u)
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(u, e1)
    return e1, e2


def check_unit(u, tol: float = UNIT_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(np.linalg.norm(u, axis=-1) - 1.0) > tol):
        raise NonUnitDirection(f"direction {u} is not unit length")
    return u


def convex_hull_2d(points, eps: float = 0.0) -> np.ndarray:
    """Indices of the strictly convex hull of 2D points, counterclockwise.

    Andrew's monotone chain; points within ``eps`` of a hull edge (collinear
    or duplicate) are dropped.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    if len(order) < 3:
        return order

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (pts[a, 1] - pts[o, 1]) * (pts[b, 0] - pts[o, 0])

    def chain(idx):
        out: list[int] = []
        for i in idx:
            while len(out) >= 2:
                # pop the middle point when it lies within eps of the chord out[-2] -> i
                chord = np.linalg.norm(pts[i] - pts[out[-2]])
                if cross(out[-2], out[-1], i) <= eps * chord:
                    out.pop()
                else:
                    break
            out.append(int(i))
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    hull = lower[:-1] + upper[:-1]
    # Drop near-duplicates the chain tolerated (zero-length edges).
    keep = []
    for i in hull:
        if not keep or np.linalg.norm(pts[i] - pts[keep[-1]]) > eps:
            keep.append(i)
    if len(keep) > 1 and np.linalg.norm(pts[keep[0]] - pts[keep[-1]]) <= eps:
        keep.pop()
    return np.array(keep, dtype=int)


# -- planar pieces -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PlanarConvexPolygon:
    """Strictly convex polygon, vertices counterclockwise in its own 2D frame.

    ``origin``/``frame`` optionally embed the 2D coordinates in space
    (``x = origin + a * frame[0] + b * frame[1]``).
    """

    vertices: np.ndarray
    origin: np.ndarray | None = field(default=None, compare=False)
    frame: np.ndarray | None = field(default=None, compare=False)

    @cached_property
    def perimeter(self) -> float:
        d = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.linalg.norm(d, axis=1).sum())

    @cached_property
    def area(self) -> float:
        x, y = self.vertices.T
        return float(0.5 * (x * np.roll(y, -1) - np.roll(x, -1) * y).sum())

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    @cached_property
    def circumradius(self) -> float:
        return float(np.linalg.norm(self.vertices - self.centroid, axis=1).max())

    def contains(self, p, eps: float | None = None) -> np.ndarray:
        eps = REL_EPS * self.circumradius if eps is None else eps
        p = np.asarray(p, dtype=float)
        a = self.vertices
        d = np.roll(a, -1, axis=0) - a
        d = d / np.linalg.norm(d, axis=1, keepdims=True)
        rel = p[..., None, :] - a
        side = d[:, 0] * rel[..., 1] - d[:, 1] * rel[..., 0]
        return np.all(side >= -eps, axis=-1)


@dataclass(frozen=True)
class Disc:
    """Analytic planar disc (a ball slice)."""

    radius: float
    center: np.ndarray | None = field(default=None, compare=False)
    normal: np.ndarray | None = field(default=None, compare=False)

    @property
    def perimeter(self) -> float:
        return 2.0 * np.pi * self.radius

    @property
    def area(self) -> float:
        return np.pi * self.radius**2


def planar_polygon(points, eps: float | None = None) -> PlanarConvexPolygon:
    """Convex hull of 2D points with collinear vertices pruned."""
    pts = np.asarray(points, dtype=float)
    if eps is None:
        span = np.ptp(pts, axis=0).max() if len(pts) else 0.0
        eps = REL_EPS * max(span, 1e-300)
    idx = convex_hull_2d(pts, eps)
    if len(idx) < 3:
        raise DegenerateInput("polygon has fewer than 3 extreme vertices")
    return PlanarConvexPolygon(pts[idx])


def regular_polygon(n: int, radius: float = 1.0) -> PlanarConvexPolygon:
    t = 2 * np.pi * np.arange(n) / n
    return PlanarConvexPolygon(radius * np.column_stack([np.cos(t), np.sin(t)]))


def visual_width(rel) -> np.ndarray:
    """Angular width of the smallest sector holding the direction vectors ``rel``.

    ``rel`` has shape (..., m, 2). The width is ``2*pi`` minus the largest gap
    between sorted azimuths.
    """
    rel = np.asarray(rel, dtype=float)
    ang = np.sort(np.arctan2(rel[..., 1], rel[..., 0]), axis=-1)
    gaps = np.diff(ang, axis=-1)
    wrap = 2 * np.pi - (ang[..., -1] - ang[..., 0])
    biggest = np.maximum(gaps.max(axis=-1, initial=0.0), wrap)
    return 2 * np.pi - biggest


def planar_visual_angle(polygon: PlanarConvexPolygon, p) -> float:
    """Visual angle of ``polygon`` from the exterior point ``p``."""
    p = np.asarray(p, dtype=float)
    if polygon.contains(p):
        raise PointInside(f"{p} is inside the polygon")
    return float(visual_width(polygon.vertices - p))


# -- bodies ------------------------------------------------------------------


@dataclass(frozen=True)
class QuermassTriple:
    V: float
    F: float
    M: float

    def as_dict(self) -> dict:
        return {"V": self.V, "F": self.F, "M": self.M}


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(3))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def centroid(self) -> np.ndarray:
        return self.center

    @property
    def circumradius(self) -> float:
        return float(self.radius)

    @property
    def eps(self) -> float:
        return REL_EPS * self.radius


@dataclass(frozen=True, eq=False)
class ConvexPolytope:
    """Polytope with merged polygonal faces and per-edge exterior dihedral angles.

    ``faces[f]`` lists vertex indices counterclockwise seen from outside;
    ``normals``/``offsets`` give the half-spaces ``<n_f, x> <= d_f``.
    ``edges[e] = (a, b)`` with incident faces ``edge_faces[e]``.
    """

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]
    normals: np.ndarray
    offsets: np.ndarray
    edges: np.ndarray
    edge_faces: np.ndarray
    edge_lengths: np.ndarray
    dihedral: np.ndarray

    @cached_property
    def face_areas(self) -> np.ndarray:
        out = []
        for f, idx in enumerate(self.faces):
            pts = self.vertices[list(idx)]
            c = np.cross(pts, np.roll(pts, -1, axis=0)).sum(axis=0)
            out.append(0.5 * float(c @ self.normals[f]))
        return np.array(out)

    @cached_property
    def volume(self) -> float:
        return float((self.face_areas * self.offsets).sum() / 3.0)

    @cached_property
    def centroid(self) -> np.ndarray:
        # Cone decomposition from an interior reference point.
        ref = self.vertices.mean(axis=0)
        total = np.zeros(3)
        vol = 0.0
        for idx in self.faces:
            pts = self.vertices[list(idx)]
            for i in range(1, len(pts) - 1):
                a, b, c = pts[0], pts[i], pts[i + 1]
                v = np.dot(a - ref, np.cross(b - ref, c - ref)) / 6.0
                total += v * (ref + a + b + c) / 4.0
                vol += v
        return total / vol

    @cached_property
    def circumradius(self) -> float:
        return float(np.linalg.norm(self.vertices - self.centroid, axis=1).max())

    @property
    def eps(self) -> float:
        return REL_EPS * self.circumradius

    @cached_property
    def edge_orientation(self) -> np.ndarray:
        """(F, E) matrix: +1 if face f walks edge e from a to b, -1 if b to a."""
        index = {(int(a), int(b)): e for e, (a, b) in enumerate(self.edges)}
        out = np.zeros((len(self.faces), len(self.edges)))
        for f, idx in enumerate(self.faces):
            for a, b in zip(idx, idx[1:] + idx[:1]):
                if (a, b) in index:
                    out[f, index[(a, b)]] = 1.0
                else:
                    out[f, index[(b, a)]] = -1.0
        return out

    @cached_property
    def vertex_edge_incidence(self) -> np.ndarray:
        out = np.zeros((len(self.vertices), len(self.edges)))
        e = np.arange(len(self.edges))
        out[self.edges[:, 0], e] = 1.0
        out[self.edges[:, 1], e] = 1.0
        return out

    def transformed(self, rotation=None, translation=None, scale: float = 1.0) -> "ConvexPolytope":
        pts = self.vertices * scale
        if rotation is not None:
            pts = pts @ np.asarray(rotation).T
        if translation is not None:
            pts = pts + np.asarray(translation)
        return build_polytope(pts)


Body = Union[ConvexPolytope, Ball]


def _affine_rank_ok(pts: np.ndarray) -> bool:
    centered = pts - pts.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    return len(s) == 3 and s[2] > 1e-10 * max(s[0], 1e-300)


def build_polytope(points) -> ConvexPolytope:
    """Convex hull of a 3D point cloud with coplanar facets merged into polygons."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 4:
        raise DegenerateInput("need at least 4 points in 3D")
    if not _affine_rank_ok(pts):
        raise DegenerateInput("points are coplanar or collinear")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:  # pragma: no cover - rank check catches the usual cases
        raise DegenerateInput(str(exc)) from exc

    scale = np.linalg.norm(pts - pts.mean(axis=0), axis=1).max()
    tol = 1e-9
    eq = hull.equations
    parent = list(range(len(eq)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, nbrs in enumerate(hull.neighbors):
        for j in nbrs:
            if np.linalg.norm(eq[i, :3] - eq[j, :3]) < tol and abs(eq[i, 3] - eq[j, 3]) < tol * scale:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(len(eq)):
        groups.setdefault(find(i), []).append(i)

    # Keep only genuine hull vertices, reindexed in lexicographic order for determinism.
    used = sorted(set(hull.vertices.tolist()), key=lambda i: tuple(pts[i]))
    remap = {old: new for new, old in enumerate(used)}
    verts = pts[used]

    faces, normals, offsets = [], [], []
    for root in sorted(groups, key=lambda r: min(groups[r])):
        members = groups[root]
        n = eq[members, :3].mean(axis=0)
        n /= np.linalg.norm(n)
        idx = sorted({remap[int(v)] for m in members for v in hull.simplices[m]})
        e1, e2 = perp_basis(n)
        local = np.column_stack([verts[idx] @ e1, verts[idx] @ e2])
        order = convex_hull_2d(local, 1e-12 * scale)
        ring = [idx[k] for k in order]
        start = ring.index(min(ring))
        ring = ring[start:] + ring[:start]
        faces.append(tuple(ring))
        normals.append(n)
        offsets.append(float(np.mean(verts[ring] @ n)))

    edge_map: dict[tuple[int, int], list[int]] = {}
    for f, ring in enumerate(faces):
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edge_map.setdefault((min(a, b), max(a, b)), []).append(f)
    bad = [k for k, v in edge_map.items() if len(v) != 2]
    if bad:
        raise DegenerateInput(f"hull edges not shared by exactly two faces: {bad[:3]}")

    normals = np.array(normals)
    keys = sorted(edge_map)
    edges = np.array(keys, dtype=int)
    edge_faces = np.array([edge_map[k] for k in keys], dtype=int)
    lengths = np.linalg.norm(verts[edges[:, 0]] - verts[edges[:, 1]], axis=1)
    n1, n2 = normals[edge_faces[:, 0]], normals[edge_faces[:, 1]]
    dihedral = np.arctan2(np.linalg.norm(np.cross(n1, n2), axis=1), np.einsum("ij,ij->i", n1, n2))

    return ConvexPolytope(
        vertices=verts,
        faces=tuple(faces),
        normals=normals,
        offsets=np.array(offsets),
        edges=edges,
        edge_faces=edge_faces,
        edge_lengths=lengths,
        dihedral=dihedral,
    )


def cube(side: float = 1.0) -> ConvexPolytope:
    corners = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], dtype=float)
    return build_polytope(side * corners)


def regular_tetrahedron(edge: float = 1.0) -> ConvexPolytope:
    pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return build_polytope(pts * edge / (2 * np.sqrt(2)))


def unit_ball(radius: float = 1.0) -> Ball:
    return Ball(np.zeros(3), radius)


def builtin(name: str, r: float = 1.0) -> Body:
    if name == "ball":
        return unit_ball(r)
    if name == "cube":
        return cube()
    if name == "tetrahedron":
        return regular_tetrahedron()
    raise ValueError(f"unknown builtin body {name!r}")


def load_polytope_json(path) -> ConvexPolytope:
    """Read ``{"points": [[x, y, z], ...]}`` and build its hull.

    Raises ``json.JSONDecodeError`` (with line/column) on malformed input.
    """
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "points" not in data:
        raise ValueError("body JSON must be an object with a 'points' array")
    return build_polytope(np.asarray(data["points"], dtype=float))


# -- quantities ----------------------------------------------------------------


def quermassintegrals(body: Body) -> QuermassTriple:
    if isinstance(body, Ball):
        r = body.radius
        return QuermassTriple(4.0 / 3.0 * np.pi * r**3, 4.0 * np.pi * r**2, 4.0 * np.pi * r)
    M = 0.5 * float(np.dot(body.edge_lengths, body.dihedral))
    return QuermassTriple(body.volume, float(body.face_areas.sum()), M)


def contains(body: Body, p) -> np.ndarray | bool:
    """Closed membership test; vectorized over leading axes of ``p``."""
    p = np.asarray(p, dtype=float)
    if isinstance(body, Ball):
        out = np.linalg.norm(p - body.center, axis=-1) <= body.radius + body.eps
    else:
        out = np.max(p @ body.normals.T - body.offsets, axis=-1) <= body.eps
    return bool(out) if np.ndim(out) == 0 else out


def support(body: Body, u) -> np.ndarray | float:
    u = check_unit(u)
    if isinstance(body, Ball):
        out = u @ body.center + body.radius
    else:
        out = np.max(u @ body.vertices.T, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def chord_lengths(body: Body, u, x) -> np.ndarray:
    """Length of ``body`` cut by the lines ``x + t u`` (stacked, ``u`` unit)."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if isinstance(body, Ball):
        rel = x - body.center
        perp = rel - np.einsum("ij,ij->i", rel, u)[:, None] * u
        h2 = body.radius**2 - np.einsum("ij,ij->i", perp, perp)
        return 2.0 * np.sqrt(np.maximum(h2, 0.0))
    a = u @ body.normals.T
    b = body.offsets - x @ body.normals.T
    tiny = 1e-300
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = b / np.where(np.abs(a) > tiny, a, np.nan)
    t_hi = np.min(np.where(a > tiny, ratio, np.inf), axis=1)
    t_lo = np.max(np.where(a < -tiny, ratio, -np.inf), axis=1)
    parallel_miss = np.any((np.abs(a) <= tiny) & (b < 0), axis=1)
    chord = np.maximum(t_hi - t_lo, 0.0)
    return np.where(parallel_miss, 0.0, chord)


def line_hits(body: Body, u, x) -> tuple[bool, float]:
    """Whether the line through ``x`` with direction ``u`` meets ``body``, and its chord."""
    u = check_unit(u)
    x = np.asarray(x, dtype=float)
    chord = float(chord_lengths(body, u, x)[0])
    if isinstance(body, Ball):
        rel = x - body.center
        dist = np.linalg.norm(rel - (rel @ u) * u)
        return bool(dist <= body.radius + body.eps), chord
    # Tangent lines have zero chord but still touch within eps.
    e1, e2 = perp_basis(u)
    proj = planar_polygon(np.column_stack([body.vertices @ e1, body.vertices @ e2]))
    return bool(proj.contains(np.array([x @ e1, x @ e2]), body.eps)), chord


def slice_measures(body: Body, v, p) -> tuple[np.ndarray, np.ndarray]:
    """Perimeter and area of the sections ``<x, v> = p`` (stacked, ``v`` unit)."""
    v = np.atleast_2d(np.asarray(v, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if isinstance(body, Ball):
        d = p - v @ body.center
        rho = np.sqrt(np.maximum(body.radius**2 - d * d, 0.0))
        return 2 * np.pi * rho, np.pi * rho * rho
    A = body.vertices[body.edges[:, 0]]
    B = body.vertices[body.edges[:, 1]]
    ha = v @ A.T - p[:, None]
    hb = v @ B.T - p[:, None]
    crossing = ha * hb < 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(crossing, ha / (ha - hb), 0.0)
    X = A[None] + t[..., None] * (B - A)[None]
    S = np.sign(hb - ha) * crossing
    seg = np.einsum("fe,ne,nek->nfk", body.edge_orientation, S, X)
    lengths = np.linalg.norm(seg, axis=2)
    c = v @ body.normals.T
    s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        h = np.where(s > 1e-12, (body.offsets - c * p[:, None]) / s, 0.0)
    area = 0.5 * np.sum(lengths * h, axis=1)
    return lengths.sum(axis=1), area


def slice(body: Body, v, p: float):
    """Section of ``body`` by the plane ``<x, v> = p``; ``None`` when empty or tangent."""
    v = check_unit(v)
    hi = support(body, v)
    lo = -support(body, -v)
    if p >= hi - body.eps or p <= lo + body.eps:
        return None
    e1, e2 = perp_basis(v)
    if isinstance(body, Ball):
        d = p - v @ body.center
        return Disc(float(np.sqrt(body.radius**2 - d * d)), body.center + d * v, v)
    A = body.vertices[body.edges[:, 0]]
    B = body.vertices[body.edges[:, 1]]
    ha, hb = A @ v - p, B @ v - p
    cross = ha * hb < 0
    pts = [A[cross] + (ha[cross] / (ha[cross] - hb[cross]))[:, None] * (B - A)[cross]]
    pts.append(body.vertices[np.abs(body.vertices @ v - p) <= body.eps])
    pts = np.vstack(pts)
    origin = p * v
    local = np.column_stack([(pts - origin) @ e1, (pts - origin) @ e2])
    try:
        poly = planar_polygon(local, body.eps)
    except DegenerateInput:
        return None
    return PlanarConvexPolygon(poly.vertices, origin, np.vstack([e1, e2]))


def line_visual_angles(body: Body, u, x) -> np.ndarray:
    """Dihedral angle of ``body`` seen from the lines ``x + t u`` (stacked, lines missing body)."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if isinstance(body, Ball):
        rel = x - body.center
        perp = rel - np.einsum("ij,ij->i", rel, u)[:, None] * u
        d = np.linalg.norm(perp, axis=1)
        return 2 * np.arcsin(np.clip(body.radius / d, 0.0, 1.0))
    e1, e2 = perp_basis(u)
    rel = body.vertices[None] - x[:, None, :]
    planar = np.stack([np.einsum("nvk,nk->nv", rel, e1), np.einsum("nvk,nk->nv", rel, e2)], axis=-1)
    return visual_width(planar)


def dihedral_visual_angle_line(body: Body, u, x) -> float:
    """Angle between the two planes through the line ``x + t u`` tangent to ``body``."""
    hit, _ = line_hits(body, u, x)
    if hit:
        raise LineMeetsBody("the line meets the body")
    return float(line_visual_angles(body, u, x)[0])
