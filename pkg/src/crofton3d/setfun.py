"""The set functions alpha, beta, gamma of a spherically convex region.

Monte Carlo estimators sample from the region's bounding cap (for ``u``) and the
matching band ``|<v, axis>| <= sin(rho)`` (for ``v``), then reject. Both proposals
contain their targets, so this is plain rejection sampling with a tighter
envelope than the whole sphere.
"""

from __future__ import annotations

import numpy as np

from .convex_body import perp_basis
from .errors import DomainError
from .mc import McConfig, McEstimate, mean_estimate
from .sphere import (
    Region,
    SphericalCap,
    cap_alpha,
    uniform_band,
    uniform_cap,
    uniform_sphere,
)

# alpha(I) and beta(I) of an arc of length w both equal this times (w - sin w).
PLANAR_CONSTANT = 2.0


def alpha_closed(region: Region) -> float:
    """``pi |W| - <c(W), c(W*)>``."""
    if isinstance(region, SphericalCap):
        return cap_alpha(region.radius)
    return float(np.pi * region.area - region.centroid @ region.dual_centroid)


def proposals(region: Region) -> tuple[np.ndarray, float, float]:
    """Bounding-cap axis, cap radius for ``u`` draws, and band half-height for ``v`` draws."""
    axis, rho = region.bounding_cap()
    if rho >= np.pi / 2:
        return axis, np.pi, 1.0
    return axis, rho, float(np.sin(rho))


def cap_area(radius: float) -> float:
    return 4 * np.pi * np.sin(radius / 2) ** 2


def alpha_mc(region: Region, cfg: McConfig) -> McEstimate:
    axis, rho, h = proposals(region)
    weight = 0.5 * cap_area(rho) * 4 * np.pi * h

    def kernel(rng, n):
        u = uniform_cap(rng, n, axis, rho)
        v = uniform_band(rng, n, axis, h)
        keep = region.contains(u) & region.in_tilde(v)
        return weight * np.abs(np.einsum("ij,ij->i", u, v)) * keep

    return mean_estimate(kernel, cfg, stream=1)


def beta_mc(region: Region, cfg: McConfig) -> McEstimate:
    axis, _, h = proposals(region)
    weight = (4 * np.pi * h) ** 3 / 8

    def kernel(rng, n):
        v1, v2, v3 = (uniform_band(rng, n, axis, h) for _ in range(3))
        keep = region.in_tilde(v1) & region.in_tilde(v2) & region.in_tilde(v3)
        det = np.einsum("ij,ij->i", v1, np.cross(v2, v3))
        return weight * np.abs(det) * keep

    return mean_estimate(kernel, cfg, stream=2)


def dihedral_excess(d):
    """``D^2 - sin^2 D``, series-evaluated for small ``D`` to avoid cancellation."""
    d = np.asarray(d, dtype=float)
    # series truncation and cancellation errors balance near 0.03 (both ~5e-13)
    small = np.abs(d) < 0.03
    d2 = d * d
    series = d2 * d2 / 3 * (1 - 2 * d2 / 15 + d2 * d2 / 105)
    return np.where(small, series, d2 - np.sin(d) ** 2)


def gamma_mc(region: Region, cfg: McConfig) -> McEstimate:
    axis, _, h = proposals(region)
    weight = 4 * np.pi * 4 * np.pi * h / 8

    def kernel(rng, n):
        u = uniform_sphere(rng, n)
        v = uniform_band(rng, n, axis, h)
        keep = ~region.contains(u, 0.0) & ~region.contains(-u, 0.0) & region.in_tilde(v)
        out = np.zeros(n)
        if keep.any():
            d = region.dihedral_angles(u[keep])
            out[keep] = weight * dihedral_excess(d) * np.abs(np.einsum("ij,ij->i", u[keep], v[keep]))
        return out

    return mean_estimate(kernel, cfg, stream=3)


def beta_batch(rng: np.random.Generator, axes: np.ndarray, h: np.ndarray, in_tilde, m: int) -> np.ndarray:
    """One beta estimate per region from ``m`` triples each.

    ``axes``/``h`` give per-region band proposals, ``in_tilde(v)`` maps stacked
    draws of shape (n, m, 3) to a boolean (n, m).
    """
    n = len(axes)
    e1, e2 = perp_basis(axes)

    def draw():
        z = rng.uniform(-1.0, 1.0, (n, m)) * h[:, None]
        phi = rng.uniform(0.0, 2 * np.pi, (n, m))
        s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        return (z[..., None] * axes[:, None] + (s * np.cos(phi))[..., None] * e1[:, None]
                + (s * np.sin(phi))[..., None] * e2[:, None])

    v1, v2, v3 = draw(), draw(), draw()
    keep = in_tilde(v1) & in_tilde(v2) & in_tilde(v3)
    c = np.cross(v2, v3)
    det = np.abs(v1[..., 0] * c[..., 0] + v1[..., 1] * c[..., 1] + v1[..., 2] * c[..., 2])
    return (4 * np.pi * h) ** 3 / 8 * np.mean(det * keep, axis=1)


def _check_arc(omega: float):
    if not 0 < omega < np.pi:
        raise DomainError(f"arc length {omega} outside (0, pi)")


def planar_alpha(omega: float, cfg: McConfig) -> McEstimate:
    """``(1/2) \\int_{u in I, v in I~} |<u, v>|`` for an arc ``I`` of length ``omega``.

    ``I~`` is the arc turned by +-90 degrees (total length ``2 omega``).
    """
    _check_arc(omega)

    def kernel(rng, n):
        a = rng.uniform(0.0, omega, n)
        b = rng.uniform(0.0, omega, n) + np.pi / 2 + np.pi * rng.integers(0, 2, n)
        return 0.5 * omega * 2 * omega * np.abs(np.cos(a - b))

    return mean_estimate(kernel, cfg, stream=4)


def planar_beta(omega: float, cfg: McConfig) -> McEstimate:
    """``(1/4) \\int_{v_i in I~} |det(v_1, v_2)|``."""
    _check_arc(omega)

    def kernel(rng, n):
        b1 = rng.uniform(0.0, omega, n) + np.pi * rng.integers(0, 2, n)
        b2 = rng.uniform(0.0, omega, n) + np.pi * rng.integers(0, 2, n)
        return 0.25 * (2 * omega) ** 2 * np.abs(np.sin(b2 - b1))

    return mean_estimate(kernel, cfg, stream=5)
