"""Verifiers for the solid-angle Crofton identities and the Crofton-Herglotz formula."""

from __future__ import annotations

import math

import numpy as np

from ..convex_body import Ball, Body, PlanarConvexPolygon, chord_lengths, line_visual_angles, perp_basis, quermassintegrals, visual_width
from ..mc import McConfig, McEstimate, radial_integral
from ..setfun import dihedral_excess
from ..sphere import uniform_sphere
from .exterior import (
    R_TRUNC_FACTOR,
    alpha_integrand,
    area_squared_integrand,
    ball_alpha_integral,
    ball_area_squared_integral,
    ball_herglotz_integral,
    ball_slice_l2_integral,
    beta_integrand,
    exterior_integral,
)
from .lines_planes import line_measure, plane_measure
from .report import VerifierReport, sigma_of, value_of

PI = np.pi


def _use_quadrature(body: Body, method: str) -> bool:
    if method not in ("auto", "mc", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if method == "quadrature" and not isinstance(body, Ball):
        raise ValueError("quadrature is only available for balls")
    return method == "quadrature" or (method == "auto" and isinstance(body, Ball))


def thm1_rhs(body: Body) -> float:
    q = quermassintegrals(body)
    return 0.5 * PI * q.M * q.F - 2 * PI**2 * q.V


def verify_thm1(body: Body, cfg: McConfig, r_trunc: float | None = None, method: str = "auto",
                rel_tol: float = 0.02) -> VerifierReport:
    """``\\int_{P not in K} alpha(W(P)) dP`` against ``pi M F / 2 - 2 pi^2 V``."""
    if _use_quadrature(body, method):
        lhs = ball_alpha_integral(body.radius)
        return VerifierReport("thm1", lhs, thm1_rhs(body), 1e-8, details={"method": "quadrature"})
    lhs = exterior_integral(body, alpha_integrand(body), cfg, r_trunc)
    return VerifierReport("thm1", lhs, thm1_rhs(body), rel_tol, details={"method": "mc"})


def verify_thm2(body: Body, cfg: McConfig, inner: int = 1000, r_trunc: float | None = None,
                rel_tol: float = 0.03) -> VerifierReport:
    """``\\int_{P not in K} beta(W(P)) dP`` against ``M^3 - pi^4 V`` (nested Monte Carlo)."""
    q = quermassintegrals(body)
    lhs = exterior_integral(body, beta_integrand(body, inner), cfg, r_trunc, stream=31)
    return VerifierReport("thm2", lhs, q.M**3 - PI**4 * q.V, rel_tol,
                          details={"method": "mc", "outer": cfg.samples, "inner": inner})


def exterior_area_squared(body: Body, cfg: McConfig, r_trunc: float | None, method: str):
    if _use_quadrature(body, method):
        return ball_area_squared_integral(body.radius)
    return exterior_integral(body, area_squared_integrand(body), cfg, r_trunc, stream=32)


def verify_thm3(body: Body, cfg: McConfig, r_trunc: float | None = None, method: str = "auto",
                rel_tol: float = 0.02) -> VerifierReport:
    """``\\int L(K cap E)^2 dE`` against ``\\int_{P not in K} |W(P)|^2 dP + 4 pi^2 V``."""
    q = quermassintegrals(body)
    quadrature = _use_quadrature(body, method)
    ext = exterior_area_squared(body, cfg, r_trunc, method)
    if quadrature:
        lhs = ball_slice_l2_integral(body.radius)
        rhs = ext + 4 * PI**2 * q.V
        return VerifierReport("thm3", lhs, rhs, 1e-6, details={"method": "quadrature", "exterior": ext})
    lhs = plane_measure(body, cfg, "L2")
    rhs = McEstimate(ext.mean + 4 * PI**2 * q.V, ext.stderr, ext.samples, ext.seed, ext.tail)
    return VerifierReport("thm3", lhs, rhs, rel_tol, details={"method": "mc"})


def verify_thm4(body: Body, cfg: McConfig, r_trunc: float | None = None, method: str = "auto",
                equality_tol: float = 0.01) -> VerifierReport:
    """``\\int_{P not in K} |W(P)|^2 dP >= 4 pi^2 V``, with equality exactly for balls.

    Balls pass when the two sides agree within ``equality_tol``; other bodies pass
    when the margin is not significantly negative.
    """
    q = quermassintegrals(body)
    lhs = exterior_area_squared(body, cfg, r_trunc, method)
    rhs = 4 * PI**2 * q.V
    margin = value_of(lhs) - rhs
    sigma = sigma_of(lhs)
    margin_sigma = margin / sigma if sigma > 0 else (0.0 if margin == 0 else math.copysign(math.inf, margin))
    is_ball = isinstance(body, Ball)
    if is_ball:
        passed = abs(margin) <= equality_tol * rhs
    else:
        passed = margin >= -3 * sigma
    details = {"margin": margin, "margin_sigma": margin_sigma, "equality_expected": is_ball,
               "method": "quadrature" if not isinstance(lhs, McEstimate) else "mc"}
    return VerifierReport("thm4", lhs, rhs, equality_tol if is_ball else 0.0, details=details, passed=passed)


def herglotz_rhs(body: Body) -> float:
    q = quermassintegrals(body)
    return 2 * q.M**2 - PI**3 * q.F / 2


def herglotz_lhs_mc(body: Body, cfg: McConfig, r_trunc: float | None = None) -> McEstimate:
    """Lines missing the body, stratified by distance of their foot from the centroid axis."""
    R = body.circumradius
    r_trunc = R_TRUNC_FACTOR * R if r_trunc is None else r_trunc
    center = body.centroid

    def integrand(rng, r, dirs):
        u = uniform_sphere(rng, len(r))
        e1, e2 = perp_basis(u)
        x = center + (r * dirs[:, 0])[:, None] * e1 + (r * dirs[:, 1])[:, None] * e2
        out = np.zeros(len(r))
        miss = chord_lengths(body, u, x) <= 0
        if miss.any():
            d = line_visual_angles(body, u[miss], x[miss])
            out[miss] = 2 * PI * dihedral_excess(d)
        return out

    return radial_integral(integrand, 2, R, r_trunc, cfg, decay=3.0, stream=33)


def verify_herglotz(body: Body, cfg: McConfig, r_trunc: float | None = None, method: str = "auto",
                    rel_tol: float = 0.02) -> VerifierReport:
    """``\\int_{G missing K} (D^2 - sin^2 D) dG`` against ``2 M^2 - pi^3 F / 2``."""
    if _use_quadrature(body, method):
        return VerifierReport("herglotz", ball_herglotz_integral(body.radius), herglotz_rhs(body), 1e-6,
                              details={"method": "quadrature"})
    return VerifierReport("herglotz", herglotz_lhs_mc(body, cfg, r_trunc), herglotz_rhs(body), rel_tol,
                          details={"method": "mc"})


def omega_excess(w):
    """``w - sin w`` with a series for small ``w``."""
    w = np.asarray(w, dtype=float)
    w2 = w * w
    return np.where(w < 0.03, w * w2 / 6 * (1 - w2 / 20 + w2 * w2 / 840), w - np.sin(w))


def verify_planar_crofton(polygon: PlanarConvexPolygon, cfg: McConfig, r_trunc: float | None = None,
                          rel_tol: float = 0.02) -> VerifierReport:
    """``\\int_{P not in K} 2 (w - sin w) dP`` against ``L^2 - 2 pi F`` in the plane."""
    R = polygon.circumradius
    r_trunc = R_TRUNC_FACTOR * R if r_trunc is None else r_trunc
    center = polygon.centroid

    def integrand(rng, r, dirs):
        pts = center + r[:, None] * dirs
        out = np.zeros(len(r))
        outside = ~polygon.contains(pts, 0.0)
        if outside.any():
            w = visual_width(polygon.vertices[None] - pts[outside][:, None, :])
            out[outside] = 2 * omega_excess(w)
        return out

    lhs = radial_integral(integrand, 2, R, r_trunc, cfg, decay=2.0, stream=34)
    rhs = polygon.perimeter**2 - 2 * PI * polygon.area
    return VerifierReport("planar_crofton", lhs, rhs, rel_tol, details={"method": "mc"})


def lemma1_consistency(body: Body, cfg: McConfig, r_trunc: float | None = None,
                       rel_tol: float = 0.02) -> VerifierReport:
    """Measure of (line, plane) pairs both meeting K, by two routes.

    Product route: independent line and plane measures. Point-first route: the
    ``|<u, v>|``-weighted factorization through the intersection point, with
    interior points contributing ``2 pi^2`` each and exterior points ``alpha``.
    """
    lines = line_measure(body, cfg, "hit")
    planes = plane_measure(body, cfg, "hit")
    product = McEstimate(lines.mean * planes.mean,
                         math.hypot(lines.stderr * planes.mean, planes.stderr * lines.mean),
                         lines.samples + planes.samples, cfg.seed)
    q = quermassintegrals(body)
    if isinstance(body, Ball):
        exterior: float | McEstimate = ball_alpha_integral(body.radius)
        point_first: float | McEstimate = 2 * PI**2 * q.V + exterior
    else:
        ext = exterior_integral(body, alpha_integrand(body), cfg, r_trunc)
        point_first = McEstimate(2 * PI**2 * q.V + ext.mean, ext.stderr, ext.samples, ext.seed, ext.tail)
    exact = PI / 2 * q.F * q.M
    return VerifierReport("lemma1", product, point_first, rel_tol, details={"exact": exact})
