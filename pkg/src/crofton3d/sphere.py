"""Spherically convex regions of S^2: polygons, caps, duals, centroids.

Polygon vertices run counterclockwise seen from outside the sphere, so the edge
poles ``n_i = w_i x w_{i+1} / |.|`` point into the region and are exactly the
vertices of the dual cone.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np
from scipy.optimize import linprog

from .convex_body import check_unit, convex_hull_2d, perp_basis
from .errors import (
    AxisInsideCone,
    DegenerateInput,
    DegenerateProjection,
    DomainError,
    NotInHemisphere,
    TooCoarse,
)

EPS = 1e-9


def normalize(x):
    x = np.asarray(x, dtype=float)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def angle_between(a, b):
    """Angle between unit vectors, stable for small and near-pi angles."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.arctan2(np.linalg.norm(np.cross(a, b), axis=-1), np.sum(a * b, axis=-1))


def uniform_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    return normalize(rng.standard_normal((n, 3)))


def uniform_cap(rng: np.random.Generator, n: int, axis, radius: float) -> np.ndarray:
    """Uniform samples in the cap of angular ``radius`` about ``axis`` (any radius <= pi)."""
    z = rng.uniform(np.cos(radius), 1.0, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    e1, e2 = perp_basis(axis)
    return z[:, None] * axis + (s * np.cos(phi))[:, None] * e1 + (s * np.sin(phi))[:, None] * e2


def uniform_band(rng: np.random.Generator, n: int, axis, half_height: float) -> np.ndarray:
    """Uniform samples in ``|<v, axis>| <= half_height`` (area ``4 pi half_height``)."""
    z = rng.uniform(-half_height, half_height, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    e1, e2 = perp_basis(axis)
    return z[:, None] * axis + (s * np.cos(phi))[:, None] * e1 + (s * np.sin(phi))[:, None] * e2


def hemisphere_witness(w) -> np.ndarray:
    """Unit ``e`` maximizing ``min_i <e, w_i>``; raises if that minimum is not positive."""
    w = np.asarray(w, dtype=float)
    e = normalize(w.sum(axis=0)) if np.linalg.norm(w.sum(axis=0)) > 0 else None
    if e is not None and np.min(w @ e) > EPS:
        return e
    # max t  s.t.  <e, w_i> >= t,  -1 <= e_k <= 1
    res = linprog(
        c=[0, 0, 0, -1],
        A_ub=np.hstack([-w, np.ones((len(w), 1))]),
        b_ub=np.zeros(len(w)),
        bounds=[(-1, 1)] * 3 + [(None, 1)],
        method="highs",
    )
    if not res.success or res.x[3] <= EPS:
        raise NotInHemisphere("directions are not contained in an open hemisphere")
    return normalize(res.x[:3])


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    vertices: np.ndarray
    witness: np.ndarray

    @classmethod
    def from_directions(cls, directions, witness=None) -> "SphericalPolygon":
        """Spherical convex hull of directions lying in an open hemisphere.

        Directions are projected gnomonically onto the plane ``<y, e> = 1``,
        hulled there, and mapped back in counterclockwise order.
        """
        w = normalize(directions)
        e = hemisphere_witness(w) if witness is None else normalize(witness)
        dots = w @ e
        if np.min(dots) <= EPS:
            raise NotInHemisphere("witness does not separate the directions")
        e1, e2 = perp_basis(e)
        g = w / dots[:, None]
        plane = np.column_stack([g @ e1, g @ e2])
        span = np.ptp(plane, axis=0).max()
        idx = convex_hull_2d(plane, EPS * max(span, 1e-300))
        if len(idx) < 3:
            raise DegenerateInput("directions span fewer than 3 extreme rays")
        return cls(w[idx], e)

    @cached_property
    def edge_normals(self) -> np.ndarray:
        w = self.vertices
        return normalize(np.cross(w, np.roll(w, -1, axis=0)))

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        w = self.vertices
        return angle_between(w, np.roll(w, -1, axis=0))

    @cached_property
    def turning_angles(self) -> np.ndarray:
        """Exterior angle at each vertex: the arc between the poles of its two edges."""
        n = self.edge_normals
        return angle_between(np.roll(n, 1, axis=0), n)

    @property
    def area(self) -> float:
        return float(2 * np.pi - self.turning_angles.sum())

    @property
    def perimeter(self) -> float:
        return float(self.edge_lengths.sum())

    @property
    def centroid(self) -> np.ndarray:
        return 0.5 * (self.edge_lengths[:, None] * self.edge_normals).sum(axis=0)

    @property
    def dual_centroid(self) -> np.ndarray:
        return 0.5 * (self.turning_angles[:, None] * self.vertices).sum(axis=0)

    def dual(self) -> "SphericalPolygon":
        n = self.edge_normals
        return SphericalPolygon(n, hemisphere_witness(n))

    def rotated(self, rotation) -> "SphericalPolygon":
        r = np.asarray(rotation, dtype=float)
        return SphericalPolygon(self.vertices @ r.T, self.witness @ r.T)

    def bounding_cap(self) -> tuple[np.ndarray, float]:
        axis = normalize(self.vertices.sum(axis=0))
        return axis, float(np.max(angle_between(self.vertices, axis)))

    def contains(self, u, eps: float = EPS) -> np.ndarray:
        return np.all(np.asarray(u) @ self.edge_normals.T >= -eps, axis=-1)

    def in_tilde(self, v, eps: float = EPS) -> np.ndarray:
        d = np.asarray(v) @ self.vertices.T
        return (d.min(axis=-1) <= eps) & (d.max(axis=-1) >= -eps)

    def dihedral_angles(self, u) -> np.ndarray:
        """Width of the projection of the cone onto ``u``-perp (stacked ``u``)."""
        u = np.atleast_2d(u)
        e1, e2 = perp_basis(u)
        planar = np.stack([e1 @ self.vertices.T, e2 @ self.vertices.T], axis=-1)
        ang = np.sort(np.arctan2(planar[..., 1], planar[..., 0]), axis=-1)
        gaps = np.diff(ang, axis=-1)
        wrap = 2 * np.pi - (ang[..., -1] - ang[..., 0])
        return 2 * np.pi - np.maximum(gaps.max(axis=-1), wrap)


@dataclass(frozen=True, eq=False)
class SphericalCap:
    axis: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "axis", normalize(self.axis))
        if not 0 < self.radius <= np.pi / 2 + 1e-15:
            raise DomainError(f"cap radius {self.radius} outside (0, pi/2]")

    @property
    def area(self) -> float:
        return float(4 * np.pi * np.sin(self.radius / 2) ** 2)

    @property
    def perimeter(self) -> float:
        return float(2 * np.pi * np.sin(self.radius))

    @property
    def centroid(self) -> np.ndarray:
        return np.pi * np.sin(self.radius) ** 2 * self.axis

    @property
    def dual_centroid(self) -> np.ndarray:
        return np.pi * np.cos(self.radius) ** 2 * self.axis

    def dual(self) -> "SphericalCap":
        return SphericalCap(self.axis, np.pi / 2 - self.radius)

    def rotated(self, rotation) -> "SphericalCap":
        return SphericalCap(np.asarray(rotation) @ self.axis, self.radius)

    def bounding_cap(self) -> tuple[np.ndarray, float]:
        return self.axis, float(self.radius)

    def contains(self, u, eps: float = EPS) -> np.ndarray:
        return np.asarray(u) @ self.axis >= np.cos(self.radius) - eps

    def in_tilde(self, v, eps: float = EPS) -> np.ndarray:
        return np.abs(np.asarray(v) @ self.axis) <= np.sin(self.radius) + eps

    def dihedral_angles(self, u) -> np.ndarray:
        s = np.sqrt(np.maximum(1.0 - (np.atleast_2d(u) @ self.axis) ** 2, 0.0))
        with np.errstate(divide="ignore"):
            ratio = np.sin(self.radius) / s
        return 2 * np.arcsin(np.clip(ratio, 0.0, 1.0))

    def polygon(self, n: int) -> SphericalPolygon:
        """Inscribed regular ``n``-gon (for convergence tests only)."""
        t = 2 * np.pi * np.arange(n) / n
        e1, e2 = perp_basis(self.axis)
        w = (np.cos(self.radius) * self.axis
             + np.sin(self.radius) * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2))
        return SphericalPolygon(w, self.axis)


Region = Union[SphericalPolygon, SphericalCap]


def area(region: Region) -> float:
    return region.area


def perimeter(region: Region) -> float:
    return region.perimeter


def dual(region: Region) -> Region:
    return region.dual()


def centroid(region: Region) -> np.ndarray:
    """``\\int_region u du``."""
    return region.centroid


def centroid_dual(region: Region) -> np.ndarray:
    """Centroid of the dual cone, from turning-angle weights on the vertices."""
    return region.dual_centroid


def in_omega_tilde(region: Region, v) -> np.ndarray | bool:
    """Whether the great circle ``v``-perp meets the region."""
    out = region.in_tilde(v)
    return bool(out) if np.ndim(out) == 0 else out


def dihedral_visual_angle(region: Region, u) -> float:
    """Angle between the two planes through ``u`` tangent to the cone over ``region``."""
    u = check_unit(u)
    if region.contains(u, -EPS) or region.contains(-u, -EPS):
        raise AxisInsideCone("u or -u lies in the region")
    if isinstance(region, SphericalPolygon):
        perp = region.vertices - np.outer(region.vertices @ u, u)
        if np.min(np.linalg.norm(perp, axis=1)) < EPS:
            raise DegenerateProjection("a vertex is parallel to u")
    width = float(region.dihedral_angles(u)[0])
    assert width <= np.pi + EPS, width
    return width


def cap_alpha(omega: float) -> float:
    """Closed-form alpha of a cap of angular radius ``omega``.

    Evaluates ``2 pi^2 (1 - cos w) - pi^2 cos^2 w sin^2 w`` as
    ``pi^2 t^2 (5 - 4t + t^2)`` with ``t = 1 - cos w``, which keeps full relative
    accuracy as ``w -> 0``.
    """
    omega = np.asarray(omega, dtype=float)
    if np.any((omega <= 0) | (omega > np.pi / 2 + 1e-15)):
        raise DomainError(f"cap radius {omega} outside (0, pi/2]")
    t = 2 * np.sin(omega / 2) ** 2
    out = np.pi**2 * t * t * (5 - 4 * t + t * t)
    return float(out) if out.ndim == 0 else out


# -- smooth boundaries ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampledSphericalCurve:
    """Closed boundary curve sampled uniformly in arc length, positively oriented."""

    points: np.ndarray

    @cached_property
    def gaps(self) -> np.ndarray:
        return angle_between(self.points, np.roll(self.points, -1, axis=0))


def cap_boundary(cap: SphericalCap, n: int) -> SampledSphericalCurve:
    t = 2 * np.pi * np.arange(n) / n
    e1, e2 = perp_basis(cap.axis)
    pts = (np.cos(cap.radius) * cap.axis
           + np.sin(cap.radius) * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2))
    return SampledSphericalCurve(pts)


def boundary_centroids(curve: SampledSphericalCurve, max_gap: float = 1e-3):
    """Quadratures of ``c``, ``c*`` and ``(1/2) \\oint gamma' x gamma''`` on a sampled curve.

    Central differences in arc length; composite rectangle rule (spectrally
    accurate for periodic integrands, so the error is the O(h^2) of the stencil).
    """
    g = curve.points
    if np.max(curve.gaps) >= max_gap:
        raise TooCoarse(f"sample gap {np.max(curve.gaps):.3g} exceeds {max_gap}")
    h = curve.gaps.sum() / len(g)
    fwd, back = np.roll(g, -1, axis=0), np.roll(g, 1, axis=0)
    d1 = (fwd - back) / (2 * h)
    d2 = (fwd - 2 * g + back) / (h * h)
    kg = np.einsum("ij,ij->i", g, np.cross(d1, d2))
    c = 0.5 * h * np.cross(g, d1).sum(axis=0)
    c_dual = 0.5 * h * (kg[:, None] * g).sum(axis=0)
    binormal = 0.5 * h * np.cross(d1, d2).sum(axis=0)
    return c, c_dual, binormal


def frenet_identity_residual(curve: SampledSphericalCurve) -> float:
    """``|c + c* - (1/2) \\oint gamma' x gamma''|`` by quadrature over the samples."""
    c, c_dual, binormal = boundary_centroids(curve)
    return float(np.linalg.norm(c + c_dual - binormal))


def random_polygon(rng: np.random.Generator, n: int = 6, spread: float = 0.8) -> SphericalPolygon:
    """Hull of ``n`` random directions in a cap of radius ``spread`` about a random axis."""
    axis = uniform_sphere(rng, 1)[0]
    while True:
        pts = uniform_cap(rng, n, axis, spread)
        try:
            return SphericalPolygon.from_directions(pts)
        except DegenerateInput:
            continue


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
