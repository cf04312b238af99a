"""Small dense linear-algebra helpers shared across the package.

Everything here operates on plain numpy arrays at desk scale (dimensions
well below ten); no sparsity, no preconditioning, no cleverness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

DEFAULT_RANK_TOL = 1e-12
MAX_BISECTION_STEPS = 200


class NumericalError(RuntimeError):
    """A numerical routine could not reach its stated tolerance."""


@dataclass(frozen=True)
class Tolerance:
    """Mixed absolute/relative comparison: |a - b| <= abs_tol + rel_tol * max(|a|, |b|)."""

    abs_tol: float
    rel_tol: float = 0.0

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0):
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.rel_tol < 0:
            raise ValueError(f"rel_tol must be nonnegative, got {self.rel_tol}")

    def close(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.abs_tol + self.rel_tol * max(abs(a), abs(b))


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Copy ``x`` into a 1-D float array, optionally checking its length."""
    v = np.array(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got array of shape {v.shape}")
    if v.size < 1:
        raise ValueError("vectors must have dimension >= 1")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and v.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {v.size}")
    return v


def as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def pseudoinverse(m, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse via SVD.

    Singular values sigma <= rank_tol * sigma_max are treated as exactly zero,
    so nearly rank-deficient inputs invert stably.
    """
    a = as_matrix(m)
    if not (rank_tol > 0):
        raise ValueError(f"rank_tol must be positive, got {rank_tol}")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]))
    inv = np.where(s > rank_tol * s[0], 1.0 / np.where(s == 0, 1.0, s), 0.0)
    return (vt.T * inv) @ u.T


def orthonormal_basis(vectors: Sequence, rank_tol: float = DEFAULT_RANK_TOL) -> list[np.ndarray]:
    """Orthonormal basis of span(vectors) by modified Gram-Schmidt.

    A second orthogonalization pass keeps Q^T Q = I to ~1e-15 even for
    ill-conditioned inputs.  Directions whose residual norm falls below
    rank_tol times the largest input norm are discarded; an all-zero input
    yields the empty list.
    """
    vs = [as_vector(v) for v in vectors]
    if not vs:
        raise ValueError("orthonormal_basis needs a nonempty vector list")
    dim = vs[0].size
    for v in vs[1:]:
        if v.size != dim:
            raise ValueError("all vectors must share one dimension")
    scale = max(float(np.linalg.norm(v)) for v in vs)
    if scale == 0.0:
        return []
    basis: list[np.ndarray] = []
    for v in vs:
        w = v.copy()
        for _ in range(2):  # re-orthogonalize once
            for q in basis:
                w -= (w @ q) * q
        nw = float(np.linalg.norm(w))
        if nw > rank_tol * scale:
            basis.append(w / nw)
    return basis


def bracketed_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Bisection root of a continuous monotone g on [lo, hi].

    Returns t with |g(t)| <= tol or bracket width <= tol, within at most
    200 bisection steps.  Raises ValueError when g(lo), g(hi) do not bracket
    a sign change.
    """
    if not (lo <= hi):
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if math.copysign(1.0, glo) == math.copysign(1.0, ghi):
        raise ValueError(
            f"no sign change on [{lo}, {hi}]: g(lo)={glo:.6g}, g(hi)={ghi:.6g}"
        )
    mid = 0.5 * (lo + hi)
    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) <= tol or (hi - lo) <= tol:
            return mid
        if math.copysign(1.0, gm) == math.copysign(1.0, glo):
            lo, glo = mid, gm
        else:
            hi = mid
    return mid
