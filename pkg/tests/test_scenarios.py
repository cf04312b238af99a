from __future__ import annotations

import math

import numpy as np
import pytest

from drfeas import (
    AffineSubspace,
    ConvergenceReport,
    Expectation,
    FiniteSet,
    Hyperplane,
    Orthant,
    Status,
    build,
    classify,
    compare,
    get_scenario,
    iterate,
    list_scenarios,
    membership,
    run,
)

ALL_NAMES = [
    "hyperplane_epigraph",
    "halfspace_epigraph_plus",
    "halfspace_epigraph_minus",
    "no_slater_epigraph",
    "halfspace_halfspace",
    "hyperplane_ball",
    "hyperplane_ball_intersection",
    "union_of_balls",
    "finite_set_two_cycle",
    "finite_set_four_cycle",
    "finite_set_divergent",
    "line_ray",
    "line_cone",
    "polyhedron_2d",
    "r3_affine_orthant",
    "friedrichs_segment_square",
]


def test_registry_listing():
    names = list_scenarios()
    assert names == ALL_NAMES
    assert len(names) >= 15
    assert "r3_affine_orthant" in names and "finite_set_four_cycle" in names


def test_build_two_cycle_problem():
    prob = build("finite_set_two_cycle")
    assert isinstance(prob.A, Hyperplane)
    assert isinstance(prob.B, FiniteSet)
    assert len(prob.B.points) == 3
    assert np.allclose(prob.x0, (0.0, -1.0))
    assert prob.expectation.status == Status.CYCLE
    assert prob.expectation.cycle_period == 2
    assert prob.options.max_iter == 200


def test_build_r3_problem():
    prob = build("r3_affine_orthant")
    assert isinstance(prob.A, AffineSubspace)
    assert np.asarray(prob.A.L).shape == (2, 3)
    assert isinstance(prob.B, Orthant) and prob.B.n == 3
    assert np.allclose(prob.x0, (1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0))
    e = prob.expectation
    assert e.status == Status.LINEAR
    assert e.rate == pytest.approx(1.0 / math.sqrt(3.0))
    assert e.limit_in_intersection is False and e.shadow_in_intersection is True


def test_build_override_rewires_expectation():
    # steeper ray -> smaller uniform bound baked into the expectation
    prob = build("line_ray", {"theta": math.pi / 2.0})
    assert prob.expectation.max_steps_to_converge == 5
    default = build("line_ray")
    assert default.expectation.max_steps_to_converge == 9


def test_unknown_scenario_rejected():
    with pytest.raises(ValueError):
        build("moebius_strip")
    with pytest.raises(ValueError):
        get_scenario("")


def test_unknown_override_rejected():
    with pytest.raises(ValueError):
        build("line_ray", {"thota": 1.0})
    with pytest.raises(ValueError):
        build("hyperplane_ball", {"radius": 2.0})


@pytest.mark.parametrize("name", ALL_NAMES)
def test_scenario_meets_its_expectation(name):
    res = run(name)
    assert res.verdict.passed, "\n".join(
        f"{c.name}: {c.detail}" for c in res.verdict.checks if not c.passed
    )


def test_no_slater_run_never_stalls_or_stops():
    # with the stop test disabled the shadows keep creeping toward the
    # origin: strictly shrinking first coordinate, never an exact repeat,
    # and the classifier refuses to call it finite
    res = run("no_slater_epigraph", options={"fix_tol": 0.0, "max_iter": 100})
    mags = [abs(float(s.shadow[0])) for s in res.trace.steps]
    assert all(m > 0.0 for m in mags)
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert res.report.status != Status.FINITE


def test_no_slater_default_run_exhausts_budget():
    res = run("no_slater_epigraph")
    assert res.report.status == Status.BUDGET_EXHAUSTED
    assert np.allclose(res.report.shadow_limit, (0.0, 0.0), atol=1e-6)


def test_halfspace_epigraph_plus_two_step_sweep():
    prob = build("halfspace_epigraph_plus")
    rng = np.random.default_rng(41)
    for _ in range(50):
        x0 = rng.uniform(-10.0, 10.0, size=2)
        trace = iterate(prob.A, prob.B, x0, prob.options)
        report = classify(trace)
        assert report.status == Status.FINITE
        assert report.n_stop <= 2
        assert membership(prob.A, report.limit) and membership(prob.B, report.limit)


def test_divergent_scenario_keeps_best_pair():
    res = run("finite_set_divergent")
    assert res.report.status == Status.DIVERGENT
    ba = res.report.best_approx
    assert ba.gap == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(ba.a, (0.0, 0.0)) and np.allclose(ba.b, (0.0, 1.0))


def test_compare_flags_mismatches():
    res = run("hyperplane_ball")
    wrong = Expectation(
        status=Status.LINEAR,
        limit=(9.0, 9.0),
        max_steps_to_converge=0,
    )
    verdict = compare("hyperplane_ball", res.report, wrong)
    assert not verdict.passed
    failed = {c.name for c in verdict.checks if not c.passed}
    assert "status" in failed and "limit" in failed and "max_steps_to_converge" in failed
    for c in verdict.checks:
        if not c.passed:
            assert c.detail  # every failure explains itself


def test_compare_ignores_unset_fields():
    res = run("halfspace_halfspace")
    loose = Expectation(status=Status.FINITE)
    verdict = compare("halfspace_halfspace", res.report, loose)
    assert verdict.passed
    assert [c.name for c in verdict.checks] == ["status"]


def test_run_options_override_scenario_options():
    res = run("finite_set_two_cycle", options={"max_iter": 60})
    assert len(res.trace.steps) == 60
    assert res.report.status == Status.CYCLE


def test_report_is_consistent_with_trace():
    for name in ("hyperplane_ball", "polyhedron_2d", "line_cone"):
        res = run(name)
        assert isinstance(res.report, ConvergenceReport)
        assert res.report.n_stop == res.trace.steps[-1].n
        assert np.allclose(res.report.shadow_limit, res.trace.final_shadow)
