"""Visual solid angle of a convex body from an exterior point."""

from __future__ import annotations

import numpy as np

from .convex_body import Ball, Body, ConvexPolytope, contains
from .errors import PointInsideBody
from .sphere import SphericalCap, SphericalPolygon, cap_alpha, normalize


def closest_point(body: ConvexPolytope, p) -> np.ndarray:
    """Nearest point of the polytope to an exterior ``p`` (vertex/edge/face enumeration)."""
    p = np.asarray(p, dtype=float)
    verts = body.vertices
    candidates = [verts]
    a, b = verts[body.edges[:, 0]], verts[body.edges[:, 1]]
    t = np.clip(np.einsum("ij,ij->i", p - a, b - a) / np.einsum("ij,ij->i", b - a, b - a), 0.0, 1.0)
    candidates.append(a + t[:, None] * (b - a))
    foot = p - (body.normals @ p - body.offsets)[:, None] * body.normals
    inside = np.max(foot @ body.normals.T - body.offsets, axis=1) <= body.eps
    candidates.append(foot[inside])
    pts = np.vstack(candidates)
    return pts[np.argmin(np.linalg.norm(pts - p, axis=1))]


def solid_angle(body: ConvexPolytope, p) -> SphericalPolygon:
    """Directions ``u`` whose ray ``p + t u`` meets the polytope."""
    p = np.asarray(p, dtype=float)
    if contains(body, p):
        raise PointInsideBody(f"{p} is not exterior to the body")
    e = normalize(closest_point(body, p) - p)
    return SphericalPolygon.from_directions(body.vertices - p, witness=e)


def solid_angle_ball(ball: Ball, p) -> SphericalCap:
    rel = ball.center - np.asarray(p, dtype=float)
    d = float(np.linalg.norm(rel))
    if d <= ball.radius + ball.eps:
        raise PointInsideBody(f"{p} is not exterior to the ball")
    return SphericalCap(rel / d, float(np.arcsin(ball.radius / d)))


def solid_angle_of(body: Body, p):
    return solid_angle_ball(body, p) if isinstance(body, Ball) else solid_angle(body, p)


def exterior_geometry(body: Body, p):
    """Area, centroid and dual centroid of the solid angles from many exterior points.

    For polytopes the silhouette is read off face visibility: an edge is on the
    silhouette when exactly one incident face faces ``p``. Sums over silhouette
    edges and vertices need no ordering; the turning angle at a silhouette vertex
    comes from the sum ``s`` of the two unit inward edge poles meeting there,
    ``theta = 2 atan2(sqrt(4 - |s|^2), |s|)``. Points inside the body give NaN.
    """
    p = np.atleast_2d(np.asarray(p, dtype=float))
    if isinstance(body, Ball):
        rel = body.center - p
        d = np.linalg.norm(rel, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            omega = np.arcsin(np.where(d > body.radius, body.radius / d, np.nan))
            axis = rel / d[:, None]
        area = 4 * np.pi * np.sin(omega / 2) ** 2
        c = (np.pi * np.sin(omega) ** 2)[:, None] * axis
        c_dual = (np.pi * np.cos(omega) ** 2)[:, None] * axis
        return area, c, c_dual

    visible = (p @ body.normals.T - body.offsets) > 0
    f1, f2 = body.edge_faces[:, 0], body.edge_faces[:, 1]
    sil = visible[:, f1] != visible[:, f2]

    w = body.vertices[None] - p[:, None, :]
    w /= np.linalg.norm(w, axis=2, keepdims=True)
    wa, wb = w[:, body.edges[:, 0]], w[:, body.edges[:, 1]]
    cr = np.cross(wa, wb)
    sin_l = np.linalg.norm(cr, axis=2)
    length = np.arctan2(sin_l, np.einsum("nek,nek->ne", wa, wb))
    with np.errstate(invalid="ignore", divide="ignore"):
        n = cr / sin_l[..., None]
    inward = np.einsum("nek,nk->ne", n, body.centroid - p)
    n = np.where(sil[..., None], n * np.sign(inward)[..., None], 0.0)

    c = 0.5 * np.einsum("ne,nek->nk", np.where(sil, length, 0.0), n)
    s = np.einsum("ve,nek->nvk", body.vertex_edge_incidence, n)
    count = sil.astype(float) @ body.vertex_edge_incidence.T
    s_norm = np.linalg.norm(s, axis=2)
    theta = 2 * np.arctan2(np.sqrt(np.maximum(4 - s_norm**2, 0.0)), s_norm)
    theta = np.where(count == 2, theta, 0.0)
    area = 2 * np.pi - theta.sum(axis=1)
    c_dual = 0.5 * np.einsum("nv,nvk->nk", theta, w)

    outside = ~contains(body, p)
    area = np.where(outside, area, np.nan)
    return area, c, c_dual


def exterior_alpha(body: Body, p) -> np.ndarray:
    """alpha of the solid angle at each exterior point (``pi |W| - <c(W), c(W*)>``)."""
    if isinstance(body, Ball):
        d = np.linalg.norm(np.atleast_2d(p) - body.center, axis=1)
        out = np.full(d.shape, np.nan)
        ok = d > body.radius
        out[ok] = cap_alpha(np.arcsin(body.radius / d[ok]))
        return out
    area, c, c_dual = exterior_geometry(body, p)
    return np.pi * area - np.einsum("nk,nk->n", c, c_dual)


def exterior_area(body: Body, p) -> np.ndarray:
    return exterior_geometry(body, p)[0]


def vertex_directions(body: Body, p) -> np.ndarray:
    """Unnormalised directions from each point to every vertex (polytopes)."""
    return body.vertices[None] - np.atleast_2d(p)[:, None, :]
