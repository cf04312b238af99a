"""Randomized invariant suites at full strength.

Each suite draws its instances from the parametric set definitions (never
through the code under test) and raises on the first violation; the tests
here pin the seeds and insist the advertised number of instances actually
ran.
"""
from __future__ import annotations

import numpy as np
import pytest

from property_suites import (
    suite_epigraph_inequality,
    suite_firm_nonexpansive,
    suite_idempotence,
    suite_optimality_sampling,
    suite_penrose,
    suite_reflector_nonexpansive,
    suite_rotator_identity,
    suite_subset_consistency,
    suite_variational_inequality,
)

FULL_SUITES = [
    (suite_idempotence, 101),
    (suite_firm_nonexpansive, 102),
    (suite_variational_inequality, 103),
    (suite_epigraph_inequality, 104),
    (suite_rotator_identity, 105),
    (suite_penrose, 106),
]

EXTRA_SUITES = [
    (suite_optimality_sampling, 107),
    (suite_reflector_nonexpansive, 108),
    (suite_subset_consistency, 109),
]


@pytest.mark.parametrize("suite,seed", FULL_SUITES, ids=lambda v: getattr(v, "__name__", v))
def test_full_strength_suite(suite, seed):
    checked = suite(np.random.default_rng(seed), 1000)
    assert checked >= 1000


@pytest.mark.parametrize("suite,seed", EXTRA_SUITES, ids=lambda v: getattr(v, "__name__", v))
def test_supporting_suite(suite, seed):
    checked = suite(np.random.default_rng(seed), 500)
    assert checked >= 500


def test_suites_are_deterministic_under_seed():
    a = suite_penrose(np.random.default_rng(42), 50)
    b = suite_penrose(np.random.default_rng(42), 50)
    assert a == b == 50
