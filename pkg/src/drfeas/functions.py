"""Convex functions with evaluation, subgradient, and proximal oracles.

Each variant supplies exactly what epigraph projection needs: f(x), one
element of the subdifferential, and prox_{t f}(x) = argmin_p t f(p) +
(1/2)||p - x||^2 for t > 0.  The prox is the deterministic selection rule
everywhere a multi-valued choice could otherwise arise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_vector, bracketed_root

PROX_STATIONARITY_TOL = 1e-9  # contract: x - prox(t,x) lies in t * subdifferential


class ConvexFunction:
    """Interface: value / subgradient / prox.  Subclasses are immutable."""

    def value(self, x) -> float:
        raise NotImplementedError

    def subgradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def prox(self, t: float, x) -> np.ndarray:
        raise NotImplementedError

    def _check_t(self, t: float) -> None:
        if not (t > 0):
            raise ValueError(f"prox needs t > 0, got {t}")


@dataclass(frozen=True)
class LinearFn(ConvexFunction):
    """f(x) = <a, x> + c."""

    a: tuple
    c: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(float(v) for v in np.atleast_1d(self.a)))

    @property
    def dim(self) -> int:
        return len(self.a)

    def _a(self) -> np.ndarray:
        return np.array(self.a)

    def value(self, x) -> float:
        return float(self._a() @ as_vector(x, self.dim)) + self.c

    def subgradient(self, x) -> np.ndarray:
        as_vector(x, self.dim)
        return self._a()

    def prox(self, t: float, x) -> np.ndarray:
        self._check_t(t)
        return as_vector(x, self.dim) - t * self._a()


@dataclass(frozen=True)
class QuadraticFn(ConvexFunction):
    """f(x) = ||x||^2 + c, any ambient dimension."""

    c: float = 0.0

    def value(self, x) -> float:
        v = as_vector(x)
        return float(v @ v) + self.c

    def subgradient(self, x) -> np.ndarray:
        return 2.0 * as_vector(x)

    def prox(self, t: float, x) -> np.ndarray:
        self._check_t(t)
        return as_vector(x) / (1.0 + 2.0 * t)


@dataclass(frozen=True)
class LowerCapFn(ConvexFunction):
    """f(x) = theta - sqrt(1 - ||x||^2) on the closed unit ball, +inf outside.

    The graph is the lower hemisphere of the ball of radius 1 around
    (0, theta); its epigraph is that ball fattened upward.  The prox is
    radial: p = s * x/||x||, where s in [0, 1] minimizes the 1-D restriction
    t*f(s) + (s - r)^2/2 with r = ||x||.  Interior minimizers solve
    t*s/sqrt(1-s^2) + s - r = 0 (strictly increasing in s), found by
    bisection; when that expression is still negative at s -> 1 the minimum
    sits on the boundary s = 1.
    """

    theta: float = 0.0

    def value(self, x) -> float:
        v = as_vector(x)
        r2 = float(v @ v)
        if r2 > 1.0:
            return math.inf
        return self.theta - math.sqrt(max(0.0, 1.0 - r2))

    def subgradient(self, x) -> np.ndarray:
        v = as_vector(x)
        r2 = float(v @ v)
        if r2 >= 1.0:
            raise ValueError("subgradient undefined on/outside the unit sphere")
        return v / math.sqrt(1.0 - r2)

    def prox(self, t: float, x) -> np.ndarray:
        self._check_t(t)
        v = as_vector(x)
        r = float(np.linalg.norm(v))
        if r == 0.0:
            return np.zeros_like(v)
        s_hi = 1.0 - 1e-12

        def slope(s: float) -> float:
            return t * s / math.sqrt(1.0 - s * s) + (s - r)

        if slope(s_hi) <= 0.0:
            s = 1.0
        else:
            s = bracketed_root(slope, 0.0, s_hi, tol=1e-14)
        return (s / r) * v
