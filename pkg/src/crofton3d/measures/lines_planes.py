"""Invariant measures on lines and planes, sphere constants, and Crofton baselines.

Conventions: ``dE = (1/2) dv dp`` and ``dG = (1/2) du dx`` with ``u, v`` uniform on
S^2 (area 4 pi), so every unoriented line/plane is counted once.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import dblquad, quad

from ..convex_body import Body, chord_lengths, perp_basis, quermassintegrals, slice_measures, support
from ..mc import McConfig, McEstimate, mean_estimate
from ..sphere import uniform_sphere
from .report import VerifierReport

PAIR_MEAN = 0.5
TRIPLE_MEAN = np.pi / 8


def sphere_constant_pair(cfg: McConfig, antithetic: bool = False) -> McEstimate:
    """Mean of ``|<u, v>|`` over independent uniform pairs."""

    def kernel(rng, n):
        u = uniform_sphere(rng, n)
        v = uniform_sphere(rng, n)
        if antithetic:
            v = -v
        return np.abs(np.einsum("ij,ij->i", u, v))

    return mean_estimate(kernel, cfg, stream=10)


def sphere_constant_triple(cfg: McConfig) -> McEstimate:
    """Mean of ``|det(v1, v2, v3)|`` over independent uniform triples."""

    def kernel(rng, n):
        v1, v2, v3 = (uniform_sphere(rng, n) for _ in range(3))
        return np.abs(np.einsum("ij,ij->i", v1, np.cross(v2, v3)))

    return mean_estimate(kernel, cfg, stream=11)


def pair_constant_quadrature() -> float:
    """Mean of ``|cos theta|`` over ``v`` with ``u = e_z`` fixed."""
    val, _ = quad(lambda t: abs(np.cos(t)) * np.sin(t), 0, np.pi, points=[np.pi / 2], epsabs=1e-14, epsrel=1e-13)
    return 2 * np.pi * val / (4 * np.pi)


def triple_constant_quadrature() -> float:
    """Mean of ``|det|`` with ``v3 = e_z``: 2D quadrature over ``v2`` of the exact ``v1``-mean.

    For fixed ``v2, v3`` the ``v1`` average of ``|<v1, v2 x v3>|`` is ``|v2 x v3| / 2``.
    """

    def inner(theta, phi):
        v2 = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
        return 0.5 * np.linalg.norm(np.cross(v2, [0.0, 0.0, 1.0])) * np.sin(theta)

    val, _ = dblquad(inner, 0, 2 * np.pi, 0, np.pi, epsabs=1e-13, epsrel=1e-13)
    return val / (4 * np.pi)


# -- line and plane samplers --------------------------------------------------------


def sample_lines(rng: np.random.Generator, n: int, center, radius: float):
    """Uniform directions and feet uniform in the disc of ``radius`` about ``center`` in u-perp."""
    u = uniform_sphere(rng, n)
    e1, e2 = perp_basis(u)
    r = radius * np.sqrt(rng.random(n))
    phi = rng.uniform(0, 2 * np.pi, n)
    x = np.asarray(center) + (r * np.cos(phi))[:, None] * e1 + (r * np.sin(phi))[:, None] * e2
    return u, x


def sample_planes(rng: np.random.Generator, n: int, body: Body):
    """Uniform normals, offsets uniform on the support interval; also returns the widths."""
    v = uniform_sphere(rng, n)
    hi = support(body, v)
    lo = -support(body, -v)
    p = lo + rng.random(n) * (hi - lo)
    return v, p, hi - lo


def line_measure(body: Body, cfg: McConfig, weight: str = "hit") -> McEstimate:
    """``\\int_{G meets K} dG`` (``weight='hit'``) or ``\\int L(K cap G) dG`` (``'chord'``)."""
    R = body.circumradius
    scale = 0.5 * 4 * np.pi * np.pi * R * R

    def kernel(rng, n):
        u, x = sample_lines(rng, n, body.centroid, R)
        chord = chord_lengths(body, u, x)
        return scale * (chord > 0 if weight == "hit" else chord)

    return mean_estimate(kernel, cfg, stream=20)


def plane_measure(body: Body, cfg: McConfig, weight: str = "hit") -> McEstimate:
    """``\\int dE`` over planes meeting K, or of ``L``, ``A`` or ``L^2`` of the section."""

    def kernel(rng, n):
        v, p, width = sample_planes(rng, n, body)
        if weight == "hit":
            f = np.ones(n)
        else:
            L, A = slice_measures(body, v, p)
            f = {"L": L, "A": A, "L2": L * L}[weight]
        return 2 * np.pi * width * f

    return mean_estimate(kernel, cfg, stream=21)


def crofton_baselines(body: Body, cfg: McConfig, rel_tol: float = 0.01) -> list[VerifierReport]:
    q = quermassintegrals(body)
    return [
        VerifierReport("lines_meeting", line_measure(body, cfg, "hit"), np.pi / 2 * q.F, rel_tol),
        VerifierReport("line_chords", line_measure(body, cfg, "chord"), 2 * np.pi * q.V, rel_tol),
        VerifierReport("planes_meeting", plane_measure(body, cfg, "hit"), q.M, rel_tol),
        VerifierReport("plane_perimeters", plane_measure(body, cfg, "L"), np.pi**2 / 2 * q.F, rel_tol),
        VerifierReport("plane_areas", plane_measure(body, cfg, "A"), 2 * np.pi * q.V, rel_tol),
    ]
