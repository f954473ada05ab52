import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from suita_lab import (
    DimensionError,
    DomainSpec,
    UnboundedDomainError,
    contains,
    defining_value,
    minkowski_gauge,
    nearest_boundary_point,
    volume,
)
from suita_lab.indicatrix import sample_ball, shard_generator

SPECS = [DomainSpec.ball(2), DomainSpec.egg(0.25), DomainSpec.egg(2.0), DomainSpec.siegel(2)]


def test_membership_examples():
    assert contains(DomainSpec.ball(2), [0, 0])
    assert contains(DomainSpec.siegel(2), [0, -1])
    assert contains(DomainSpec.egg(0.25), [0, 0.99])


def test_defining_value_examples():
    assert defining_value(DomainSpec.ball(2), [1, 0]) == 0
    assert defining_value(DomainSpec.siegel(2), [0, -1]) == -2
    assert defining_value(DomainSpec.egg(0.25), [0, 0]) == -1


def test_boundary_is_outside():
    assert not contains(DomainSpec.ball(2), [1, 0])
    assert not contains(DomainSpec.siegel(2), [0, 0])


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        contains(DomainSpec.ball(2), [0, 0, 0])
    with pytest.raises(DimensionError):
        defining_value(DomainSpec.siegel(3), [0, 0])


@pytest.mark.parametrize("spec", SPECS, ids=repr)
def test_contains_matches_sign(spec):
    rng = np.random.default_rng(1)
    z = (rng.normal(size=(10_000, 2)) + 1j * rng.normal(size=(10_000, 2))) * 0.8
    assert np.array_equal(contains(spec, z), defining_value(spec, z) < 0)


def _egg_volume_fubini(mu):
    # 4 pi^2 int_0^1 r2 * (1 - r2^{2mu}) / 2 dr2, after integrating r1 over [0, sqrt(1 - r2^{2mu})]
    val, _ = quad(lambda r2: 4 * math.pi ** 2 * r2 * (1 - r2 ** (2 * mu)) / 2, 0, 1, epsabs=1e-14)
    return val


def test_volume_examples():
    assert volume(DomainSpec.ball(2)) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)
    assert volume(DomainSpec.egg(1.0)) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)
    assert volume(DomainSpec.egg(0.25)) == pytest.approx(math.pi ** 2 * 0.2, rel=1e-15)
    for mu in (0.1, 0.25, 0.7, 3.0):
        assert volume(DomainSpec.egg(mu)) == pytest.approx(_egg_volume_fubini(mu), rel=1e-10)
    with pytest.raises(UnboundedDomainError):
        volume(DomainSpec.siegel(2))


@pytest.mark.parametrize("mu", [0.25, 1.0, 2.0])
def test_volume_monte_carlo(mu):
    spec = DomainSpec.egg(mu)
    N = 1_000_000
    pts = sample_ball(2, N, 1.3, shard_generator(99, 0))
    f = np.mean(contains(spec, pts))
    box = math.pi ** 2 / 2 * 1.3 ** 4
    sigma = box * math.sqrt(f * (1 - f) / N)
    assert abs(f * box - volume(spec)) < 3 * sigma


def test_gauge_examples():
    assert minkowski_gauge(DomainSpec.ball(2), [3, 4]) == pytest.approx(5, abs=1e-11)
    for mu in (0.25, 2.0):
        assert minkowski_gauge(DomainSpec.egg(mu), [0, 0.3 + 0.4j]) == pytest.approx(0.5, abs=1e-11)
        assert minkowski_gauge(DomainSpec.egg(mu), [0.7j, 0]) == pytest.approx(0.7, abs=1e-11)
    root = brentq(lambda t: 1 / t ** 2 + 1 / math.sqrt(t) - 1, 1.0, 10.0, xtol=1e-15)
    assert minkowski_gauge(DomainSpec.egg(0.25), [1, 1]) == pytest.approx(root, abs=1e-11)
    assert minkowski_gauge(DomainSpec.egg(0.25), [0, 0]) == 0


def test_gauge_against_grid_scan():
    t = np.linspace(1.0, 3.0, 200_001)
    f = 1 / t ** 2 + 1 / np.sqrt(t) - 1
    t_grid = t[np.argmin(np.abs(f))]
    assert abs(minkowski_gauge(DomainSpec.egg(0.25), [1, 1]) - t_grid) < 2e-5


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
       st.floats(0.05, 3), st.floats(0, 2 * math.pi), st.sampled_from([0.2, 0.5, 1.0, 3.0]))
def test_gauge_homogeneous(a, b, c, d, r, th, mu):
    v = np.array([a + 1j * b, c + 1j * d])
    if np.linalg.norm(v) < 1e-3:
        return
    spec = DomainSpec.egg(mu)
    lam = r * np.exp(1j * th)
    assert abs(minkowski_gauge(spec, lam * v) - r * minkowski_gauge(spec, v)) < 1e-10 * max(1, r * np.linalg.norm(v))


@pytest.mark.parametrize("spec", [DomainSpec.ball(2), DomainSpec.egg(0.25), DomainSpec.egg(3.0)], ids=repr)
def test_gauge_vs_membership(spec):
    rng = np.random.default_rng(5)
    v = (rng.normal(size=(2000, 2)) + 1j * rng.normal(size=(2000, 2))) * 0.6
    g = minkowski_gauge(spec, v)
    keep = np.abs(g - 1) > 1e-9
    assert np.array_equal((g < 1)[keep], contains(spec, v)[keep])


def test_serialization_round_trip():
    for spec in SPECS:
        text = spec.to_json()
        assert DomainSpec.from_json(text) == spec
    import json
    d = json.loads(DomainSpec.egg(0.25).to_json())
    assert d == {"variant": "egg", "n": 2, "mu": 0.25}


def test_convexity_flags():
    assert DomainSpec.egg(0.5).is_convex and not DomainSpec.egg(0.49).is_convex
    assert DomainSpec.ball(2).is_convex and DomainSpec.egg(0.3).is_reinhardt


@pytest.mark.parametrize("q", [0.5, 0.7, 0.9, 0.99])
def test_nearest_boundary_point_egg(q):
    spec = DomainSpec.egg(0.25)
    p = np.array([0, q], complex)
    zeta = nearest_boundary_point(spec, p)
    assert abs(defining_value(spec, zeta)) < 1e-10
    # brute force over the boundary in absolute coordinates
    x = np.linspace(-1, 1, 400_001)
    y = (1 - x ** 2) ** 2
    best = np.min(np.hypot(x, y - q))
    assert np.linalg.norm(p - zeta) <= best + 1e-9


def test_nearest_boundary_point_ball():
    zeta = nearest_boundary_point(DomainSpec.ball(2), [0.3, 0.4j])
    assert np.allclose(zeta, [0.6, 0.8j])
