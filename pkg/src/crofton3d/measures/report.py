from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..mc import McEstimate

Quantity = float | McEstimate


def value_of(q: Quantity) -> float:
    return q.total if isinstance(q, McEstimate) else float(q)


def sigma_of(q: Quantity) -> float:
    return q.stderr if isinstance(q, McEstimate) else 0.0


def describe(q: Quantity) -> dict:
    if isinstance(q, McEstimate):
        return {"value": q.total, **q.to_dict()}
    return {"value": float(q), "exact": True}


@dataclass
class VerifierReport:
    """One identity check: ``passed`` iff ``|lhs - rhs| <= max(k sigma, rel_tol |rhs|)``."""

    name: str
    lhs: Quantity
    rhs: Quantity
    rel_tol: float
    sigma_k: float = 3.0
    details: dict = field(default_factory=dict)
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = abs(self.difference) <= max(self.sigma_k * self.sigma, self.rel_tol * abs(value_of(self.rhs)))

    @property
    def difference(self) -> float:
        return value_of(self.lhs) - value_of(self.rhs)

    @property
    def sigma(self) -> float:
        return math.hypot(sigma_of(self.lhs), sigma_of(self.rhs))

    @property
    def residual_sigma(self) -> float:
        if self.sigma > 0:
            return abs(self.difference) / self.sigma
        return 0.0 if self.difference == 0 else math.inf

    @property
    def rel_error(self) -> float:
        rhs = value_of(self.rhs)
        return abs(self.difference) / abs(rhs) if rhs else abs(self.difference)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": describe(self.lhs),
            "rhs": describe(self.rhs),
            "difference": self.difference,
            "sigma": self.sigma,
            "residual_sigma": self.residual_sigma,
            "rel_error": self.rel_error,
            "rel_tol": self.rel_tol,
            "passed": bool(self.passed),
            "details": self.details,
        }
