"""Integrals over the exterior of a body, by shell-stratified Monte Carlo or quadrature."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.integrate import quad

from ..convex_body import Ball, Body, contains
from ..mc import McConfig, McEstimate, radial_integral
from ..setfun import beta_batch, dihedral_excess
from ..solid_angle import exterior_alpha, exterior_area, solid_angle_of
from ..sphere import cap_alpha, normalize

R_TRUNC_FACTOR = 20.0
EPS = 1e-9

PointFunction = Callable[[np.ndarray, np.random.Generator], np.ndarray]


def exterior_integral(body: Body, f: PointFunction, cfg: McConfig, r_trunc: float | None = None,
                      stream: int = 30) -> McEstimate:
    """``\\int_{P not in K} f(P) dP`` for an ``f`` decaying like ``d^-4``.

    ``f(points, rng)`` is evaluated only at exterior points. Shells are centred at
    the body centroid; the tail past ``r_trunc`` (default 20 circumradii) is
    reported separately in ``McEstimate.tail``.
    """
    R = body.circumradius
    r_trunc = R_TRUNC_FACTOR * R if r_trunc is None else r_trunc
    center = body.centroid

    def integrand(rng, r, dirs):
        pts = center + r[:, None] * dirs
        out = np.zeros(len(r))
        outside = ~contains(body, pts)
        if outside.any():
            out[outside] = f(pts[outside], rng)
        return out

    return radial_integral(integrand, 3, R, r_trunc, cfg, decay=2.0, stream=stream)


def alpha_integrand(body: Body) -> PointFunction:
    return lambda pts, rng: exterior_alpha(body, pts)


def area_squared_integrand(body: Body) -> PointFunction:
    return lambda pts, rng: exterior_area(body, pts) ** 2


def region_integrand(body: Body, func) -> PointFunction:
    """Adapter for a function of the solid angle itself (slow, one region at a time)."""
    return lambda pts, rng: np.array([func(solid_angle_of(body, p)) for p in pts])


def beta_integrand(body: Body, inner: int = 1000, batch: int = 256) -> PointFunction:
    """Nested estimate of beta of the solid angle, ``inner`` triples per point."""

    def f(pts, rng):
        out = np.empty(len(pts))
        for s in range(0, len(pts), batch):
            p = pts[s:s + batch]
            if isinstance(body, Ball):
                rel = body.center - p
                d = np.linalg.norm(rel, axis=1)
                axes = rel / d[:, None]
                h = body.radius / d
                out[s:s + batch] = beta_batch(rng, axes, h, lambda v: np.ones(v.shape[:2], bool), inner)
                continue
            w = normalize(body.vertices[None] - p[:, None, :])
            axes = normalize(w.sum(axis=1))
            cos_rho = np.einsum("nvk,nk->nv", w, axes).min(axis=1)
            h = np.where(cos_rho > 0, np.sqrt(np.maximum(1 - cos_rho**2, 0.0)), 1.0)

            def in_tilde(v, w=w):
                dots = np.matmul(v, w.transpose(0, 2, 1))
                return (dots.min(axis=2) <= EPS) & (dots.max(axis=2) >= -EPS)

            out[s:s + batch] = beta_batch(rng, axes, h, in_tilde, inner)
        return out

    return f


# -- ball quadratures ------------------------------------------------------------------


def ball_exterior_quadrature(radius: float, func_of_sin: Callable[[float], float]) -> float:
    """``\\int_{d > r} g(r/d) 4 pi d^2 dd`` via ``s = r/d``, where ``g`` takes ``sin(omega) = s``."""
    val, _ = quad(lambda s: func_of_sin(s) * 4 * np.pi * radius**3 / s**4 if s > 0 else 0.0,
                  0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    return val


def cap_area_from_sin(s: float) -> float:
    return 2 * np.pi * s * s / (1 + np.sqrt(1 - s * s))


def ball_alpha_integral(radius: float = 1.0) -> float:
    return ball_exterior_quadrature(radius, lambda s: cap_alpha(np.arcsin(s)) if s > 0 else 0.0)


def ball_area_squared_integral(radius: float = 1.0) -> float:
    return ball_exterior_quadrature(radius, lambda s: cap_area_from_sin(s) ** 2)


def ball_slice_l2_integral(radius: float = 1.0) -> float:
    """``\\int L(K cap E)^2 dE`` for a ball: ``(1/2) 4 pi \\int 4 pi^2 (r^2 - p^2) dp``."""
    val, _ = quad(lambda p: 4 * np.pi**2 * (radius**2 - p * p), -radius, radius, epsabs=0, epsrel=1e-13)
    return 0.5 * 4 * np.pi * val


def ball_herglotz_integral(radius: float = 1.0) -> float:
    """``\\int_{G missing K} (D^2 - sin^2 D) dG`` with ``D = 2 arcsin(r/rho)``."""

    def g(s):
        if s <= 0:
            return 0.0
        return float(dihedral_excess(2 * np.arcsin(s))) * 2 * np.pi * radius**2 / s**3

    val, _ = quad(g, 0.0, 1.0, epsabs=0, epsrel=1e-13, limit=200)
    return 0.5 * 4 * np.pi * val
