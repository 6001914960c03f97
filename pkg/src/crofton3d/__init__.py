"""Integral geometry of convex bodies in 3-space: solid angles, set functions, Crofton identities."""

from .convex_body import (
    Ball,
    ConvexPolytope,
    PlanarConvexPolygon,
    QuermassTriple,
    build_polytope,
    builtin,
    cube,
    load_polytope_json,
    planar_polygon,
    quermassintegrals,
    regular_tetrahedron,
    unit_ball,
)
from .errors import (
    AxisInsideCone,
    Crofton3dError,
    DegenerateInput,
    DegenerateProjection,
    DomainError,
    LineMeetsBody,
    NonUnitDirection,
    NotInHemisphere,
    PointInside,
    PointInsideBody,
    TailDominates,
    TooCoarse,
)
from .mc import McConfig, McEstimate
from .setfun import alpha_closed, alpha_mc, beta_mc, gamma_mc
from .solid_angle import solid_angle, solid_angle_of
from .sphere import SphericalCap, SphericalPolygon, cap_alpha

__version__ = "0.1.0"
