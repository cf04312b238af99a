"""Douglas-Rachford iteration with full trace recording and classification.

One step of the operator T_{A,B} = Id - P_A + P_B R_A is::

    a = P_A x        (selected representative)
    r = 2 a - x      (reflection R_A x)
    b = P_B r        (selected representative)
    x_next = x - a + b

The engine records every step (iterate, projections, reflection, residual)
so that the analysis layer can decide afterwards whether the run converged
finitely, decayed geometrically, settled into a cycle, or walked off to
infinity.  The shadow of a step is a = P_A x; in the convex consistent case
the shadow sequence converges to a point of the intersection even when the
iterates themselves stall elsewhere in the fixed-point set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import NumericalError, Tolerance, as_vector
from .sets import DisjointUnion, FiniteSet, SetDescriptor, membership, project

# Membership tolerance used for the report's in-intersection flags.
INTERSECTION_TOL = Tolerance(abs_tol=1e-6)
# A log-linear residual fit counts as linear convergence at this R^2.
RATE_FIT_R2_MIN = 0.999
# Cycle points must map onto each other under one DRA step this tightly.
CYCLE_VERIFY_TOL = 1e-9


class Status(str, Enum):
    FINITE = "finite"
    LINEAR = "linear"
    CYCLE = "cycle"
    DIVERGENT = "divergent"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class IterateOptions:
    """Stopping rules: the fix_tol test is relative, fix_tol * (1 + ||x_n||)."""

    max_iter: int = 10_000
    fix_tol: float = 1e-11
    div_threshold: float = 1e8

    def __post_init__(self) -> None:
        if not (isinstance(self.max_iter, int) and self.max_iter >= 1):
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        if self.fix_tol < 0:
            raise ValueError(f"fix_tol must be nonnegative, got {self.fix_tol}")
        if not (self.div_threshold > 0):
            raise ValueError(f"div_threshold must be positive, got {self.div_threshold}")


@dataclass(frozen=True)
class ClassifyOptions:
    cycle_max_period: int = 12
    cycle_tol: float = 1e-9
    rate_window: int = 30

    def __post_init__(self) -> None:
        if self.cycle_max_period < 1:
            raise ValueError("cycle_max_period must be >= 1")
        if not (self.cycle_tol > 0):
            raise ValueError("cycle_tol must be positive")
        if self.rate_window < 2:
            raise ValueError("rate_window must be >= 2")


@dataclass(frozen=True, eq=False)
class StepRecord:
    n: int
    x: np.ndarray
    a: np.ndarray
    r: np.ndarray
    b: np.ndarray
    x_next: np.ndarray
    residual: float

    @property
    def shadow(self) -> np.ndarray:
        return self.a


@dataclass(frozen=True, eq=False)
class Trace:
    A: SetDescriptor
    B: SetDescriptor
    steps: tuple
    options: IterateOptions
    stop_reason: str  # 'fix_tol' | 'div_threshold' | 'max_iter'

    @property
    def xs(self) -> list:
        """All visited iterates: each step's x plus the final x_next."""
        out = [s.x for s in self.steps]
        out.append(self.steps[-1].x_next)
        return out

    @property
    def residuals(self) -> np.ndarray:
        return np.array([s.residual for s in self.steps])

    @property
    def shadows(self) -> list:
        return [s.a for s in self.steps]

    @property
    def final_x(self) -> np.ndarray:
        return self.steps[-1].x_next

    @property
    def final_shadow(self) -> np.ndarray:
        return self.steps[-1].a


@dataclass(frozen=True, eq=False)
class BestApprox:
    """Best-approximation pair estimate: a in A (shadow limit), b = P_B a."""

    a: np.ndarray
    b: np.ndarray
    gap: float


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    status: Status
    n_stop: int
    limit: np.ndarray | None
    shadow_limit: np.ndarray | None
    rate: float | None
    cycle_period: int | None
    cycle_points: tuple | None
    best_approx: BestApprox | None
    in_intersection: dict


def dra_step(A: SetDescriptor, B: SetDescriptor, x, n: int = 0) -> StepRecord:
    """One application of T_{A,B} with all intermediate quantities recorded."""
    xv = as_vector(x, A.dim)
    a = project(A, xv).selected
    r = 2.0 * a - xv
    b = project(B, r).selected
    x_next = xv - a + b
    return StepRecord(
        n=n,
        x=xv,
        a=a,
        r=r,
        b=b,
        x_next=x_next,
        residual=float(np.linalg.norm(x_next - xv)),
    )


def iterate(A: SetDescriptor, B: SetDescriptor, x0, options: IterateOptions | None = None) -> Trace:
    """Run the DRA from x0 until fixed, divergent, or out of budget.

    Stops when the step residual drops to fix_tol * (1 + ||x_n||), when the
    next iterate's norm reaches div_threshold, or after max_iter steps.
    Inputs are never mutated; the trace owns copies.
    """
    opts = options if options is not None else IterateOptions()
    x = as_vector(x0, A.dim)
    steps = []
    stop_reason = "max_iter"
    for n in range(opts.max_iter):
        rec = dra_step(A, B, x, n=n)
        steps.append(rec)
        if rec.residual <= opts.fix_tol * (1.0 + float(np.linalg.norm(rec.x))):
            stop_reason = "fix_tol"
            break
        if float(np.linalg.norm(rec.x_next)) >= opts.div_threshold:
            stop_reason = "div_threshold"
            break
        x = rec.x_next
    return Trace(A=A, B=B, steps=tuple(steps), options=opts, stop_reason=stop_reason)


def fixed_point_residual(A: SetDescriptor, B: SetDescriptor, x) -> float:
    """min ||b - a|| over candidate pairs a in P_A x, b in P_B(2a - x).

    Zero exactly when some projection pair certifies x in Fix T: the step
    x - a + b then reproduces x.
    """
    xv = as_vector(x, A.dim)
    best = math.inf
    for a in project(A, xv).all:
        r = 2.0 * a - xv
        for b in project(B, r).all:
            best = min(best, float(np.linalg.norm(b - a)))
    return best


def _rate_fit_or_none(trace: Trace, window: int):
    from .analysis import estimate_linear_rate

    if len(trace.steps) < window + 1:
        return None
    try:
        fit = estimate_linear_rate(trace, window)
    except (ValueError, NumericalError):
        return None
    if fit.r_squared >= RATE_FIT_R2_MIN and 0.0 < fit.rate < 1.0:
        return fit
    return None


def _verified_cycle(trace: Trace, opts: ClassifyOptions):
    from .analysis import detect_cycle

    xs = trace.xs
    eff_max = min(opts.cycle_max_period, (len(xs) - 1) // 5)
    if eff_max < 1:
        return None
    found = detect_cycle(trace, eff_max, opts.cycle_tol)
    if found is None:
        return None
    period, points = found
    for i, p in enumerate(points):
        succ = points[(i + 1) % period]
        step = dra_step(trace.A, trace.B, p)
        if float(np.linalg.norm(step.x_next - succ)) > CYCLE_VERIFY_TOL:
            return None
    return period, tuple(points)


def classify(trace: Trace, options: ClassifyOptions | None = None) -> ConvergenceReport:
    """Decide which regime a finished trace landed in.

    Precedence among the statuses is Cycle > Divergent > Finite > Linear >
    BudgetExhausted, with the cycle/divergence checks only entertained for
    traces that did *not* stop via the fixed-point tolerance — a converged
    tail is otherwise indistinguishable from a period-1 cycle.  Finite
    convergence additionally demands a residual jump: the step before the
    terminal one must still exceed sqrt(fix_tol).  A geometric decay glides
    below the tolerance smoothly and is classified Linear instead.
    """
    if not trace.steps:
        raise ValueError("classify needs a nonempty trace")
    opts = options if options is not None else ClassifyOptions()
    fix_tol = trace.options.fix_tol
    last = trace.steps[-1]
    n_stop = last.n

    status = Status.BUDGET_EXHAUSTED
    limit: np.ndarray | None = None
    shadow_limit: np.ndarray | None = last.a
    rate: float | None = None
    cycle_period: int | None = None
    cycle_points: tuple | None = None
    best_approx: BestApprox | None = None

    if trace.stop_reason == "fix_tol":
        jump = len(trace.steps) == 1 or trace.steps[-2].residual > math.sqrt(fix_tol)
        if jump:
            status = Status.FINITE
            limit = last.x_next
        else:
            fit = _rate_fit_or_none(trace, opts.rate_window)
            if fit is not None:
                status = Status.LINEAR
                limit = last.x_next
                rate = fit.rate
    else:
        cyc = _verified_cycle(trace, opts)
        if cyc is not None:
            status = Status.CYCLE
            cycle_period, cycle_points = cyc
            shadow_limit = None
        elif trace.stop_reason == "div_threshold" and isinstance(
            trace.B, (FiniteSet, DisjointUnion)
        ):
            status = Status.DIVERGENT
            bp = project(trace.B, last.a)
            best_approx = BestApprox(a=last.a, b=bp.selected, gap=bp.distance)
        else:
            fit = _rate_fit_or_none(trace, opts.rate_window)
            if fit is not None:
                status = Status.LINEAR
                limit = last.x_next
                rate = fit.rate

    in_intersection = {
        "limit": _in_both(trace, limit),
        "shadow": _in_both(trace, shadow_limit),
    }
    return ConvergenceReport(
        status=status,
        n_stop=n_stop,
        limit=limit,
        shadow_limit=shadow_limit,
        rate=rate,
        cycle_period=cycle_period,
        cycle_points=cycle_points,
        best_approx=best_approx,
        in_intersection=in_intersection,
    )


def _in_both(trace: Trace, p: np.ndarray | None) -> bool | None:
    if p is None:
        return None
    return membership(trace.A, p, INTERSECTION_TOL) and membership(
        trace.B, p, INTERSECTION_TOL
    )
