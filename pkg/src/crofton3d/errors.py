"""Exception types raised by the geometry and Monte Carlo layers."""


class Crofton3dError(Exception):
    pass


class DegenerateInput(Crofton3dError, ValueError):
    """Points are affinely dependent (coplanar or collinear)."""


class NonUnitDirection(Crofton3dError, ValueError):
    pass


class PointInside(Crofton3dError, ValueError):
    """A planar point lies inside the polygon it should view from outside."""


class PointInsideBody(Crofton3dError, ValueError):
    pass


class LineMeetsBody(Crofton3dError, ValueError):
    pass


class AxisInsideCone(Crofton3dError, ValueError):
    pass


class DegenerateProjection(Crofton3dError, ValueError):
    pass


class NotInHemisphere(Crofton3dError, ValueError):
    pass


class TooCoarse(Crofton3dError, ValueError):
    pass


class DomainError(Crofton3dError, ValueError):
    pass


class TailDominates(Crofton3dError, RuntimeError):
    """The truncation tail is too large a share of an exterior integral."""
