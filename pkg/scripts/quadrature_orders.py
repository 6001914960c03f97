"""Deterministic convergence orders.

* boundary-integral residual of a cap circle against the number of samples (expect h^2),
* alpha of inscribed n-gons against the cap value (expect n^-2),
* solid angle of inscribed polytopes of the unit ball against the cap area.
"""

from __future__ import annotations

import numpy as np

from crofton3d.convex_body import build_polytope, unit_ball
from crofton3d.setfun import alpha_closed
from crofton3d.solid_angle import solid_angle, solid_angle_ball
from crofton3d.sphere import SphericalCap, cap_alpha, cap_boundary, frenet_identity_residual


def fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    theta = np.pi * (1 + 5**0.5) * i
    return np.column_stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)])


def table(title, rows):
    print(title)
    prev = None
    for n, err in rows:
        rate = "" if prev is None else f"{np.log(prev[1] / err) / np.log(n / prev[0]):6.2f}"
        print(f"  {n:8d} {err:12.3e} {rate}")
        prev = (n, err)
    print()


def main():
    cap = SphericalCap(np.array([0, 0, 1.0]), np.pi / 4)
    table("boundary residual, cap radius pi/4 (samples, residual, order)",
          [(n, frenet_identity_residual(cap_boundary(cap, n))) for n in (5000, 10**4, 2 * 10**4, 4 * 10**4)])
    table("alpha of inscribed n-gon vs cap (n, error, order)",
          [(n, abs(alpha_closed(cap.polygon(n)) - cap_alpha(np.pi / 4))) for n in (50, 100, 200, 400, 800)])
    p = np.array([0, 0, 2.5])
    target = solid_angle_ball(unit_ball(), p).area
    table("solid angle of inscribed polytope vs ball cap (vertices, error, order in vertex count)",
          [(n, abs(solid_angle(build_polytope(fibonacci_sphere(n)), p).area - target)) for n in (500, 2000, 8000)])


if __name__ == "__main__":
    main()
