"""Closed-form bounds for convex bodies of constant width ``a``.

``c = r/R`` is the inradius/circumradius ratio; ``R + r = a`` and Jung's theorem
give ``c >= sqrt(8/3) - 1``. Only the ball (``c = 1``) is checked numerically.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import bisect

from ..errors import DomainError

PI = np.pi
JUNG_MIN_RATIO = np.sqrt(8.0 / 3.0) - 1.0


@dataclass(frozen=True)
class ConstantWidthBounds:
    width: float
    ratio: float
    inradius: float
    circumradius: float
    slice_l2_upper: float
    slice_l2_upper_jung: float
    exterior_area2_lower: float
    exterior_area2_upper: float
    exterior_area2_upper_width_only: float
    remark_lower: float
    remark_upper: float
    # Whether slice L^2 integral == pi M F - 4 pi^2 V for all constant-width bodies is open.
    open_equality_question: bool = True

    def as_dict(self) -> dict:
        return asdict(self)


def exterior_lower_factor(c):
    return 8.0 / 3.0 * c**3 / (1 + c) ** 3 - 1.0 / 6.0


def constant_width_bounds(a: float, c: float) -> ConstantWidthBounds:
    if not a > 0:
        raise DomainError("width must be positive")
    if not JUNG_MIN_RATIO - 1e-15 <= c <= 1.0:
        raise DomainError(f"ratio {c} outside [sqrt(8/3) - 1, 1]")
    a3 = a**3
    return ConstantWidthBounds(
        width=a,
        ratio=c,
        inradius=a * c / (1 + c),
        circumradius=a / (1 + c),
        slice_l2_upper=8 * PI**3 * a3 * (1 / (1 + c) ** 2 - 1 / 12),
        slice_l2_upper_jung=7.0 / 3.0 * PI**3 * a3,
        exterior_area2_lower=4 * PI**3 * a3 * exterior_lower_factor(c),
        exterior_area2_upper=4 * PI**3 * a3 * (11 - 3 * c * (3 * c * c + c - 3)) / (6 * (1 + c) ** 3),
        exterior_area2_upper_width_only=4.5 * PI**3 * a3 * (np.sqrt(6) - 2),
        remark_lower=(c**3 - 1) / (1 + c) ** 3,
        remark_upper=(-23 * c**3 + 3 * c * c + 3 * c + 17) / (24 * (1 + c) ** 3),
    )


def lower_bound_positivity_root(xtol: float = 1e-12) -> float:
    """Ratio above which the exterior lower bound is positive."""
    return bisect(exterior_lower_factor, 0.5, 1.0, xtol=xtol)
