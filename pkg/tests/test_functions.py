from __future__ import annotations

import math

import numpy as np
import pytest

from drfeas import LinearFn, LowerCapFn, QuadraticFn

# prox contract: x - p in t * subdifferential(p), i.e. stationarity of
# t*f(p) + ||p - x||^2 / 2.
STATIONARITY_TOL = 1e-9


def test_linear_basics():
    f = LinearFn(a=(2.0, -1.0), c=3.0)
    assert f.dim == 2
    assert f.value((1.0, 1.0)) == pytest.approx(4.0)
    assert np.allclose(f.subgradient((5.0, 5.0)), (2.0, -1.0))
    assert np.allclose(f.prox(0.5, (1.0, 1.0)), (0.0, 1.5))


def test_quadratic_basics():
    f = QuadraticFn(c=1.0)
    assert f.value((1.0, 2.0)) == pytest.approx(6.0)
    assert np.allclose(f.subgradient((1.0, 2.0)), (2.0, 4.0))
    # argmin of t*||p||^2 + ||p-x||^2/2 is x/(1+2t)
    assert np.allclose(f.prox(1.0, (3.0, -3.0)), (1.0, -1.0))


def test_prox_rejects_nonpositive_t():
    for f in (LinearFn(a=(1.0,)), QuadraticFn(), LowerCapFn()):
        with pytest.raises(ValueError):
            f.prox(0.0, (0.5,))
        with pytest.raises(ValueError):
            f.prox(-1.0, (0.5,))


def test_prox_stationarity_linear_quadratic():
    rng = np.random.default_rng(11)
    for _ in range(300):
        d = int(rng.integers(1, 4))
        f = (
            LinearFn(a=tuple(rng.normal(size=d)), c=float(rng.normal()))
            if rng.random() < 0.5
            else QuadraticFn(c=float(rng.normal()))
        )
        x = rng.normal(scale=3.0, size=d)
        t = float(rng.uniform(0.05, 4.0))
        p = f.prox(t, x)
        g = f.subgradient(p)
        assert np.linalg.norm((x - p) - t * g) <= STATIONARITY_TOL


def test_lower_cap_value_and_domain():
    f = LowerCapFn(theta=0.5)
    assert f.value((0.0,)) == pytest.approx(-0.5)
    assert f.value((1.0,)) == pytest.approx(0.5)
    assert f.value((1.5,)) == math.inf
    assert f.value((0.6, 0.8)) == pytest.approx(0.5)  # on the sphere


def test_lower_cap_subgradient():
    f = LowerCapFn()
    g = f.subgradient((0.6, 0.0))
    assert np.allclose(g, (0.75, 0.0))
    with pytest.raises(ValueError):
        f.subgradient((1.0, 0.0))
    with pytest.raises(ValueError):
        f.subgradient((2.0, 0.0))


def test_lower_cap_prox_stationarity_interior():
    rng = np.random.default_rng(5)
    f = LowerCapFn(theta=-1.0)
    for _ in range(300):
        d = int(rng.integers(1, 4))
        x = rng.normal(scale=0.8, size=d)
        t = float(rng.uniform(0.05, 2.0))
        p = f.prox(t, x)
        r = float(np.linalg.norm(p))
        assert r <= 1.0 + 1e-12
        if r < 1.0 - 1e-9:
            g = f.subgradient(p)
            assert np.linalg.norm((x - p) - t * g) <= STATIONARITY_TOL


def test_lower_cap_prox_boundary_case():
    # Far-out query with tiny t: the 1-D slope stays negative all the way to
    # s -> 1, so the minimizer is the boundary point x/||x||.
    f = LowerCapFn()
    p = f.prox(1e-6, (10.0, 0.0))
    assert np.allclose(p, (1.0, 0.0), atol=1e-9)


def test_lower_cap_prox_origin():
    f = LowerCapFn()
    assert np.all(f.prox(1.0, (0.0, 0.0)) == 0.0)


def test_lower_cap_prox_shrinks_toward_origin():
    # The cap's slope pulls inward: prox never moves a point outward radially.
    f = LowerCapFn(theta=2.0)
    rng = np.random.default_rng(9)
    for _ in range(100):
        x = rng.normal(scale=1.2, size=2)
        p = f.prox(float(rng.uniform(0.1, 3.0)), x)
        assert np.linalg.norm(p) <= np.linalg.norm(x) + 1e-12
