"""Named preset problems with expected outcomes; the regression surface.

Each scenario pins a concrete (A, B, x0) instance of a qualitatively
different convergence regime — exact finite convergence, geometric decay
with a known rate, a two- or four-point orbit, divergence with a converged
shadow — together with an expectation the runner checks field by field.
Overrides are limited to each scenario's declared parameters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analysis import line_cone_bound, line_ray_bound
from .engine import (
    ClassifyOptions,
    ConvergenceReport,
    IterateOptions,
    Status,
    Trace,
    classify,
    iterate,
)
from .functions import LinearFn, QuadraticFn
from .linalg import as_vector
from .sets import (
    AffineSubspace,
    Ball,
    BallIntersection,
    Cone2D,
    DisjointUnion,
    Epigraph,
    FiniteSet,
    Halfspace,
    Hyperplane,
    Orthant,
    Polyhedron,
    Ray2D,
    SetDescriptor,
)

# Comparison tolerances used by the verdict.
LIMIT_TOL = 1e-6
RATE_TOL = 1e-2
CYCLE_POINT_TOL = 1e-9
GAP_TOL = 1e-9


@dataclass(frozen=True)
class Expectation:
    status: Status
    limit: tuple | None = None
    shadow_limit: tuple | None = None
    rate: float | None = None
    cycle_period: int | None = None
    cycle_points: tuple | None = None
    best_approx_gap: float | None = None
    max_steps_to_converge: int | None = None
    limit_in_intersection: bool | None = None
    shadow_in_intersection: bool | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    note: str
    params: dict
    builder: Callable[[dict], tuple]
    options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Problem:
    A: SetDescriptor
    B: SetDescriptor
    x0: np.ndarray
    expectation: Expectation
    options: IterateOptions


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Verdict:
    scenario: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass(frozen=True)
class RunResult:
    trace: Trace
    report: ConvergenceReport
    verdict: Verdict


# ---------------------------------------------------------------------------
# builders

_X_AXIS = dict(u=(0.0, 1.0), eta=0.0)


def _linear_f() -> LinearFn:
    # Default functional for the epigraph presets: f(x) = x - 1 on the line.
    # inf f = -inf, so the interior-touching hypotheses hold trivially.
    return LinearFn(a=(1.0,), c=-1.0)


def _hyperplane_epigraph(p: dict):
    A = Hyperplane(**_X_AXIS)
    B = Epigraph(_linear_f())
    exp = Expectation(
        status=Status.FINITE,
        limit_in_intersection=True,
        shadow_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


def _halfspace_epigraph_plus(p: dict):
    # A = X x R+ written as {<z,(0,-1)> <= 0}; lands in A cap B in <= 2 moves.
    A = Halfspace(u=(0.0, -1.0), eta=0.0)
    B = Epigraph(_linear_f())
    exp = Expectation(
        status=Status.FINITE,
        max_steps_to_converge=2,
        limit_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


def _halfspace_epigraph_minus(p: dict):
    A = Halfspace(u=(0.0, 1.0), eta=0.0)  # X x R-
    B = Epigraph(_linear_f())
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _no_slater_epigraph(p: dict):
    # f(x) = x^2: the epigraph touches the line only at the origin, where f
    # is differentiable with gradient 0 -- no interior point, no finite stop.
    A = Hyperplane(**_X_AXIS)
    B = Epigraph(QuadraticFn())
    exp = Expectation(status=Status.BUDGET_EXHAUSTED, shadow_limit=(0.0, 0.0))
    return A, B, as_vector(p["start"]), exp


def _halfspace_halfspace(p: dict):
    A = Halfspace(u=(0.0, 1.0), eta=0.0)
    B = Halfspace(u=(1.0, 1.0), eta=0.0)
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _hyperplane_ball(p: dict):
    theta = float(p["theta"])
    if not (0.0 <= theta < 1.0):
        raise ValueError(f"hyperplane_ball needs 0 <= theta < 1, got {theta}")
    A = Hyperplane(**_X_AXIS)
    B = Ball(center=(0.0, theta), radius=1.0)
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _hyperplane_ball_intersection(p: dict):
    A = Hyperplane(**_X_AXIS)
    B = BallIntersection(
        balls=(Ball(center=(0.0, 0.5), radius=1.0), Ball(center=(0.3, 0.4), radius=1.0))
    )
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _union_of_balls(p: dict):
    A = Hyperplane(**_X_AXIS)
    B = DisjointUnion(
        components=(Ball(center=(0.0, 0.5), radius=1.0), Ball(center=(5.0, 0.0), radius=0.5))
    )
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _finite_set_two_cycle(p: dict):
    A = Hyperplane(**_X_AXIS)
    B = FiniteSet(points=((0.0, -2.0), (1.0, 2.0), (-2.0, 0.0)))
    exp = Expectation(
        status=Status.CYCLE,
        cycle_period=2,
        cycle_points=((0.0, -1.0), (1.0, 1.0)),
    )
    return A, B, as_vector(p["start"]), exp


def _finite_set_four_cycle(p: dict):
    A = Halfspace(u=(0.0, 1.0), eta=0.0)
    B = FiniteSet(points=((2.0, 5.0), (20.0, -20.0), (8.0, 7.0), (-20.0, 0.0)))
    exp = Expectation(
        status=Status.CYCLE,
        cycle_period=4,
        cycle_points=((2.0, 17.0), (20.0, -3.0), (8.0, 7.0), (2.0, 12.0)),
    )
    return A, B, as_vector(p["start"]), exp


def _finite_set_divergent(p: dict):
    A = Hyperplane(**_X_AXIS)
    B = FiniteSet(points=((0.0, 1.0), (1.0, 2.0)))
    exp = Expectation(
        status=Status.DIVERGENT,
        shadow_limit=(0.0, 0.0),
        best_approx_gap=1.0,
    )
    return A, B, as_vector(p["start"]), exp


def _line_ray(p: dict):
    theta = float(p["theta"])
    A = Hyperplane(**_X_AXIS)
    B = Ray2D(theta=theta)
    exp = Expectation(
        status=Status.FINITE,
        max_steps_to_converge=line_ray_bound(theta).N,
        shadow_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


def _line_cone(p: dict):
    t1, t2 = float(p["theta1"]), float(p["theta2"])
    A = Hyperplane(**_X_AXIS)
    B = Cone2D(theta1=t1, theta2=t2)
    exp = Expectation(
        status=Status.FINITE,
        max_steps_to_converge=line_cone_bound(t1, t2).N,
        shadow_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


def _polyhedron_2d(p: dict):
    # Triangle (-1,-1), (3,-1), (1,2); the x-axis crosses two edges and
    # avoids every vertex.
    A = Hyperplane(**_X_AXIS)
    B = Polyhedron(
        halfspaces=(
            Halfspace(u=(0.0, -1.0), eta=1.0),
            Halfspace(u=(3.0, 2.0), eta=7.0),
            Halfspace(u=(-3.0, 2.0), eta=1.0),
        )
    )
    exp = Expectation(status=Status.FINITE, limit_in_intersection=True)
    return A, B, as_vector(p["start"]), exp


def _r3_affine_orthant(p: dict):
    A = AffineSubspace(L=((1.0, 1.0, 0.0), (1.0, 0.0, 1.0)), v=(1.0, 0.0))
    B = Orthant(n=3)
    exp = Expectation(
        status=Status.LINEAR,
        rate=1.0 / math.sqrt(3.0),
        limit=(1.0 / 3.0, 1.0, 1.0 / 3.0),
        shadow_limit=(0.0, 1.0, 0.0),
        limit_in_intersection=False,
        shadow_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


def _friedrichs_segment_square(p: dict):
    # Affine hulls of the segment [(2,1,2), (-2,1,-2)] (the line alpha=gamma,
    # beta=1) and of the square {|alpha|<=2, |beta|<=2, gamma=1}; they meet
    # only at (1,1,1) and the iteration contracts with factor 1/sqrt(2).
    A = AffineSubspace(L=((1.0, 0.0, -1.0), (0.0, 1.0, 0.0)), v=(0.0, 1.0))
    B = AffineSubspace(L=((0.0, 0.0, 1.0),), v=(1.0,))
    exp = Expectation(
        status=Status.LINEAR,
        rate=1.0 / math.sqrt(2.0),
        limit=(1.0, 1.0, 1.0),
        shadow_limit=(1.0, 1.0, 1.0),
        limit_in_intersection=True,
        shadow_in_intersection=True,
    )
    return A, B, as_vector(p["start"]), exp


_REGISTRY: dict[str, Scenario] = {}


def _register(scenario: Scenario) -> None:
    _REGISTRY[scenario.name] = scenario


_register(Scenario(
    name="hyperplane_epigraph",
    note="line vs epigraph of an affine functional: lands exactly in the "
         "intersection after a handful of steps",
    params={"start": (2.0, 3.0)},
    builder=_hyperplane_epigraph,
))
_register(Scenario(
    name="halfspace_epigraph_plus",
    note="upper halfplane vs affine epigraph: at most two moves to the "
         "intersection from any start",
    params={"start": (1.5, -2.0)},
    builder=_halfspace_epigraph_plus,
))
_register(Scenario(
    name="halfspace_epigraph_minus",
    note="lower halfplane vs affine epigraph: finite convergence into the "
         "intersection",
    params={"start": (2.0, 1.0)},
    builder=_halfspace_epigraph_minus,
))
_register(Scenario(
    name="no_slater_epigraph",
    note="line touching epi(x^2) only at the origin: geometric decay, never "
         "an exact stop; the shadow crawls to (0,0)",
    params={"start": (1.0, 1.0)},
    builder=_no_slater_epigraph,
))
_register(Scenario(
    name="halfspace_halfspace",
    note="two halfplanes with interior overlap: exact stop in a few steps",
    params={"start": (3.0, 4.0)},
    builder=_halfspace_halfspace,
))
_register(Scenario(
    name="hyperplane_ball",
    note="x-axis vs unit ball centered (0, theta), theta in [0,1): the axis "
         "cuts the interior, so the run stops exactly",
    params={"theta": 0.5, "start": (2.0, 1.5)},
    builder=_hyperplane_ball,
))
_register(Scenario(
    name="hyperplane_ball_intersection",
    note="x-axis vs lens of two overlapping unit balls: finite stop in the "
         "intersection",
    params={"start": (2.0, 1.0)},
    builder=_hyperplane_ball_intersection,
))
_register(Scenario(
    name="union_of_balls",
    note="x-axis vs union of two disjoint balls, each crossing the axis: "
         "the orbit commits to one component and stops exactly",
    params={"start": (0.5, 2.0)},
    builder=_union_of_balls,
))
_register(Scenario(
    name="finite_set_two_cycle",
    note="line vs three points: the iteration settles into a two-point orbit "
         "(0,-1) <-> (1,1) and never converges",
    params={"start": (0.0, -1.0)},
    builder=_finite_set_two_cycle,
    options={"max_iter": 200},
))
_register(Scenario(
    name="finite_set_four_cycle",
    note="halfplane vs four points: a four-point orbit "
         "(2,17) -> (20,-3) -> (8,7) -> (2,12)",
    params={"start": (2.0, 17.0)},
    builder=_finite_set_four_cycle,
    options={"max_iter": 200},
))
_register(Scenario(
    name="finite_set_divergent",
    note="line vs two points off the line: iterates march to infinity along "
         "(0,n) while the shadow freezes at the best approximation (0,0)",
    params={"start": (2.0, -1.0)},
    builder=_finite_set_divergent,
    options={"div_threshold": 1e3},
))
_register(Scenario(
    name="line_ray",
    note="x-axis vs rotated ray: spirals for at most N(theta) steps, then "
         "fixed; the shadow is then a point of the intersection",
    params={"theta": math.pi / 6.0, "start": (-4.0, -3.0)},
    builder=_line_ray,
))
_register(Scenario(
    name="line_cone",
    note="x-axis vs planar sector: globally finite with the closed-form "
         "step bound N(theta1, theta2)",
    params={"theta1": math.pi / 4.0, "theta2": 3.0 * math.pi / 4.0, "start": (3.0, -2.0)},
    builder=_line_cone,
))
_register(Scenario(
    name="polyhedron_2d",
    note="x-axis vs a triangle crossed by it: exact stop inside the overlap",
    params={"start": (4.0, 3.0)},
    builder=_polyhedron_2d,
))
_register(Scenario(
    name="r3_affine_orthant",
    note="affine plane vs nonnegative orthant in R^3: geometric convergence "
         "with rate 1/sqrt(3) to (1/3,1,1/3); the shadow limit (0,1,0) is "
         "the solution",
    params={"start": (1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0)},
    builder=_r3_affine_orthant,
))
_register(Scenario(
    name="friedrichs_segment_square",
    note="affine hulls of a segment and a square meeting at (1,1,1): linear "
         "convergence at the principal-angle cosine 1/sqrt(2)",
    params={"start": (2.0, 0.0, -1.0)},
    builder=_friedrichs_segment_square,
))


def list_scenarios() -> list[str]:
    """Registry names in registration order."""
    return list(_REGISTRY)


def get_scenario(name: str) -> Scenario:
    if name not in _REGISTRY:
        raise ValueError(f"unknown scenario {name!r}; see list_scenarios()")
    return _REGISTRY[name]


def build(name: str, overrides: dict | None = None) -> Problem:
    """Construct (A, B, x0, expectation, options) with overrides applied.

    Overrides may only touch the scenario's declared parameters; anything
    else is rejected so that a typo cannot silently run the default.
    """
    sc = get_scenario(name)
    ov = dict(overrides or {})
    unknown = set(ov) - set(sc.params)
    if unknown:
        raise ValueError(
            f"unknown override(s) {sorted(unknown)} for scenario {name!r}; "
            f"declared: {sorted(sc.params)}"
        )
    merged = {**sc.params, **ov}
    A, B, x0, exp = sc.builder(merged)
    return Problem(A=A, B=B, x0=x0, expectation=exp, options=IterateOptions(**sc.options))


def run(
    name: str,
    overrides: dict | None = None,
    options: dict | None = None,
    classify_options: ClassifyOptions | None = None,
) -> RunResult:
    """Build, iterate, classify, and compare against the expectation.

    ``options`` entries (max_iter / fix_tol / div_threshold) override the
    scenario defaults, which override the engine defaults.
    """
    sc = get_scenario(name)
    prob = build(name, overrides)
    merged = {**sc.options, **(options or {})}
    trace = iterate(prob.A, prob.B, prob.x0, IterateOptions(**merged))
    report = classify(trace, classify_options)
    verdict = compare(name, report, prob.expectation)
    return RunResult(trace=trace, report=report, verdict=verdict)


# ---------------------------------------------------------------------------
# verdicts


def _close_vec(got, want, tol: float) -> bool:
    return got is not None and float(np.linalg.norm(as_vector(got) - as_vector(want))) <= tol


def compare(name: str, report: ConvergenceReport, exp: Expectation) -> Verdict:
    checks = [
        Check(
            "status",
            report.status == exp.status,
            f"expected {exp.status.value}, got {report.status.value}",
        )
    ]
    if exp.limit is not None:
        ok = _close_vec(report.limit, exp.limit, LIMIT_TOL)
        checks.append(Check("limit", ok, f"expected {exp.limit} +/- {LIMIT_TOL}, got {report.limit}"))
    if exp.shadow_limit is not None:
        ok = _close_vec(report.shadow_limit, exp.shadow_limit, LIMIT_TOL)
        checks.append(
            Check("shadow_limit", ok, f"expected {exp.shadow_limit} +/- {LIMIT_TOL}, got {report.shadow_limit}")
        )
    if exp.rate is not None:
        ok = report.rate is not None and abs(report.rate - exp.rate) <= RATE_TOL
        checks.append(Check("rate", ok, f"expected {exp.rate:.6g} +/- {RATE_TOL}, got {report.rate}"))
    if exp.cycle_period is not None:
        ok = report.cycle_period == exp.cycle_period
        checks.append(
            Check("cycle_period", ok, f"expected {exp.cycle_period}, got {report.cycle_period}")
        )
    if exp.cycle_points is not None:
        ok = _cycle_points_match(report.cycle_points, exp.cycle_points)
        checks.append(
            Check("cycle_points", ok, f"expected {exp.cycle_points} as a set +/- {CYCLE_POINT_TOL}")
        )
    if exp.best_approx_gap is not None:
        ok = (
            report.best_approx is not None
            and abs(report.best_approx.gap - exp.best_approx_gap) <= GAP_TOL
        )
        got = None if report.best_approx is None else report.best_approx.gap
        checks.append(
            Check("best_approx_gap", ok, f"expected {exp.best_approx_gap} +/- {GAP_TOL}, got {got}")
        )
    if exp.max_steps_to_converge is not None:
        ok = report.n_stop <= exp.max_steps_to_converge
        checks.append(
            Check(
                "max_steps_to_converge",
                ok,
                f"expected n_stop <= {exp.max_steps_to_converge}, got {report.n_stop}",
            )
        )
    if exp.limit_in_intersection is not None:
        got_flag = report.in_intersection.get("limit")
        checks.append(
            Check(
                "limit_in_intersection",
                got_flag == exp.limit_in_intersection,
                f"expected {exp.limit_in_intersection}, got {got_flag}",
            )
        )
    if exp.shadow_in_intersection is not None:
        got_flag = report.in_intersection.get("shadow")
        checks.append(
            Check(
                "shadow_in_intersection",
                got_flag == exp.shadow_in_intersection,
                f"expected {exp.shadow_in_intersection}, got {got_flag}",
            )
        )
    return Verdict(scenario=name, checks=tuple(checks))


def _cycle_points_match(got, want) -> bool:
    """Unordered matching of cycle points within CYCLE_POINT_TOL."""
    if got is None or len(got) != len(want):
        return False
    remaining = [as_vector(p) for p in got]
    for w in want:
        wv = as_vector(w)
        hit = None
        for i, g in enumerate(remaining):
            if float(np.linalg.norm(g - wv)) <= CYCLE_POINT_TOL:
                hit = i
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True
