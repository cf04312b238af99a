"""Quantitative diagnostics for finished traces and subspace geometry.

Friedrichs angle between spans, empirical linear-rate estimation on log
residuals, minimal-period cycle detection, the ex-post asymptotic-regularity
measure, and the closed-form iteration bounds for the line/ray and line/cone
configurations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .linalg import NumericalError, orthonormal_basis

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids an import cycle
    from .engine import Trace

# Singular values this close to 1 are directions of U cap V, not angles.
SV_INTERSECTION_CUTOFF = 1.0 - 1e-9
# Residuals below 100*eps*(1+||x||) sit at the rounding floor; the rate fit
# skips them so the plateau does not contaminate the slope.
FLOOR_FACTOR = 100.0 * float(np.finfo(float).eps)


def friedrichs_cosine(u_span: Sequence, v_span: Sequence) -> float:
    """Cosine of the Friedrichs angle between span(u_span) and span(v_span).

    Orthonormalize both spans, take singular values of Q_u^T Q_v, discard
    those that are 1 up to 1e-9 (they belong to the intersection), and return
    the largest survivor.  When nothing survives — orthogonal complements or
    one span inside the other — the angle is right/immaterial and the cosine
    is 0 by convention.
    """
    qu = orthonormal_basis(u_span)
    qv = orthonormal_basis(v_span)
    if not qu or not qv:
        return 0.0
    m = np.array(qu) @ np.array(qv).T
    sv = np.linalg.svd(m, compute_uv=False)
    kept = sv[sv < SV_INTERSECTION_CUTOFF]
    if kept.size == 0:
        return 0.0
    return float(min(max(kept[0], 0.0), 1.0))


@dataclass(frozen=True)
class RateFit:
    rate: float
    r_squared: float
    window: tuple  # (first n, last n) actually used in the fit


def estimate_linear_rate(trace: "Trace", window: int) -> RateFit:
    """Ordinary least squares on log residual vs n over the final window.

    Uses the last ``window + 1`` recorded steps.  Residuals at the rounding
    floor (<= 100*eps*(1+||x_n||)) are excluded; if fewer than two usable
    samples remain, or the samples carry no variance to fit, the fit is
    degenerate and a NumericalError is raised.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    steps = trace.steps
    if len(steps) < window + 1:
        raise ValueError(
            f"trace has {len(steps)} steps; need at least window+1 = {window + 1}"
        )
    tail = steps[-(window + 1):]
    ns, logs = [], []
    for s in tail:
        floor = FLOOR_FACTOR * (1.0 + float(np.linalg.norm(s.x)))
        if s.residual > floor:
            ns.append(float(s.n))
            logs.append(math.log(s.residual))
    if len(ns) < 2:
        raise NumericalError("residuals sit at the rounding floor; rate fit is degenerate")
    n_arr = np.array(ns)
    y = np.array(logs)
    if float(np.ptp(y)) == 0.0:
        raise NumericalError("rate fit is degenerate: constant residuals")
    n_mean = n_arr.mean()
    y_mean = y.mean()
    sxx = float(((n_arr - n_mean) ** 2).sum())
    if sxx == 0.0:
        raise NumericalError("rate fit is degenerate: no spread in iteration index")
    slope = float(((n_arr - n_mean) * (y - y_mean)).sum()) / sxx
    pred = y_mean + slope * (n_arr - n_mean)
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y_mean) ** 2).sum())
    if ss_tot == 0.0:
        raise NumericalError("rate fit is degenerate: constant residuals")
    r2 = min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)
    return RateFit(rate=math.exp(slope), r_squared=r2, window=(int(n_arr[0]), int(n_arr[-1])))


def detect_cycle(trace: "Trace", max_period: int, tol: float):
    """Smallest period k <= max_period sustained over the last 4k steps.

    Returns (k, points) with the final k iterates in orbit order, or None.
    A constant tail reports period 1; minimality is guaranteed by scanning
    k upward.
    """
    if max_period < 1:
        raise ValueError(f"max_period must be >= 1, got {max_period}")
    if len(trace.steps) < 5 * max_period:
        raise ValueError(
            f"trace has {len(trace.steps)} steps; need at least 5*max_period = {5 * max_period}"
        )
    xs = trace.xs
    m = len(xs) - 1
    for k in range(1, max_period + 1):
        ok = True
        for j in range(m, m - 4 * k, -1):
            if float(np.linalg.norm(xs[j] - xs[j - k])) > tol:
                ok = False
                break
        if ok:
            return k, [xs[m - k + 1 + i].copy() for i in range(k)]
    return None


def asymptotic_regularity(trace: "Trace") -> float:
    """The final residual ||x_{n+1} - x_n||; callers compare to a threshold."""
    if not trace.steps:
        raise ValueError("asymptotic_regularity needs a nonempty trace")
    return trace.steps[-1].residual


# ---------------------------------------------------------------------------
# closed-form iteration bounds


@dataclass(frozen=True)
class BoundSpec:
    kind: str  # 'line_ray' | 'line_cone'
    angles: tuple
    N: int


def _floor(ratio: float) -> int:
    # Nudge before flooring: a ratio that is an exact integer in real
    # arithmetic must not lose 1 to a float rounding hair below it (a larger
    # N stays a valid upper bound, a smaller one would not).
    return int(math.floor(ratio + 1e-12))


def line_ray_bound(theta: float) -> BoundSpec:
    """Uniform bound N for the x-axis vs the ray at angle theta in (0, pi].

    N = floor(pi/theta) + 3 for theta <= pi/2, floor(pi/(pi-theta)) + 3 for
    pi/2 < theta < pi.  At theta = pi the second formula divides by zero;
    the ray then lies inside the line and one step reaches a fixed point, so
    N is pinned to the additive constant 3.
    """
    t = float(theta)
    if not (0.0 < t <= math.pi):
        raise ValueError(f"line/ray bound needs theta in (0, pi], got {t}")
    if t == math.pi:
        return BoundSpec(kind="line_ray", angles=(t,), N=3)
    if t <= math.pi / 2.0:
        n = _floor(math.pi / t) + 3
    else:
        n = _floor(math.pi / (math.pi - t)) + 3
    return BoundSpec(kind="line_ray", angles=(t,), N=n)


def line_cone_bound(theta1: float, theta2: float) -> BoundSpec:
    """Uniform bound N for the x-axis vs the cone spanned by e_theta1, e_theta2.

    Valid regime: 0 < theta1 < theta2 < pi.  Straddling cones
    (theta1 < pi/2 < theta2) use max(floor(pi/(2 theta1)),
    floor(pi/(2(pi - theta2)))) + 3; cones inside the closed upper-right
    quadrant (theta2 <= pi/2) use floor(pi/(2 theta1)) + floor(pi/(2 theta2))
    + 5; cones with pi/2 <= theta1 reduce to the second case by the mirror
    (theta1, theta2) -> (pi - theta2, pi - theta1).
    """
    t1, t2 = float(theta1), float(theta2)
    if not (0.0 < t1 < t2 < math.pi):
        raise ValueError(
            f"line/cone bound needs 0 < theta1 < theta2 < pi, got ({t1}, {t2})"
        )
    if t1 < math.pi / 2.0 < t2:
        n = max(_floor(math.pi / (2.0 * t1)), _floor(math.pi / (2.0 * (math.pi - t2)))) + 3
    else:
        if t1 >= math.pi / 2.0:
            t1, t2 = math.pi - t2, math.pi - t1
        n = _floor(math.pi / (2.0 * t1)) + _floor(math.pi / (2.0 * t2)) + 5
    return BoundSpec(kind="line_cone", angles=(float(theta1), float(theta2)), N=n)


def theoretical_bound(kind: str, **angles) -> BoundSpec:
    """Dispatcher: theoretical_bound('line_ray', theta=...) or
    theoretical_bound('line_cone', theta1=..., theta2=...)."""
    if kind == "line_ray":
        return line_ray_bound(**angles)
    if kind == "line_cone":
        return line_cone_bound(**angles)
    raise ValueError(f"unknown bound kind {kind!r}; expected 'line_ray' or 'line_cone'")
