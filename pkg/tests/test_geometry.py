from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sine_cross_ratio
from timelike.errors import CoordinateDomainError
from timelike.geometry import (
    Chart,
    Hyperplane,
    affine_cross_ratio,
    chart_distance,
    geodesic_through,
    hyperboloid_to_klein,
    hyperplane_distance,
    klein_to_hyperboloid,
    minkowski,
    spherical_cross_ratio,
)

E2 = Chart("euclidean", 2)
S2 = Chart("spherical", 2)
H2 = Chart("hyperbolic", 2)


def test_euclidean_distance():
    assert chart_distance(E2, (0, 0), (3, 4)) == pytest.approx(5.0)


def test_spherical_distance():
    assert chart_distance(S2, (1, 0, 0), (0, 1, 0)) == pytest.approx(math.pi / 2)


def test_hyperbolic_distance():
    x = (math.cosh(1), math.sinh(1), 0.0)
    assert chart_distance(H2, (1, 0, 0), x) == pytest.approx(1.0, rel=1e-12)


def test_hyperbolic_distance_matches_arccosh_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = klein_to_hyperboloid(rng.uniform(-0.6, 0.6, 2))
        y = klein_to_hyperboloid(rng.uniform(-0.6, 0.6, 2))
        expected = math.acosh(max(1.0, -minkowski(x, y)))
        assert chart_distance(H2, x, y) == pytest.approx(expected, abs=1e-9)


def test_point_validation():
    with pytest.raises(CoordinateDomainError):
        S2.point((1.0, 1.0, 0.0))
    with pytest.raises(CoordinateDomainError):
        H2.point((-1.0, 0.0, 0.0))


def test_geodesic_euclidean():
    ray = geodesic_through(E2, (0, 0), (2, 0))
    assert np.allclose(ray.direction, (1, 0))
    assert np.allclose(ray.point(2.0), (2, 0))


def test_geodesic_spherical_quarter_turn():
    q = np.array([1.0, 1.0, 0.0]) / math.sqrt(2)
    ray = geodesic_through(S2, (1, 0, 0), q)
    assert np.allclose(ray.point(math.pi / 2), (0, 1, 0), atol=1e-12)


def test_geodesic_hyperbolic():
    q = (math.cosh(2), math.sinh(2), 0.0)
    ray = geodesic_through(H2, (1, 0, 0), q)
    assert np.allclose(ray.point(2.0), q, atol=1e-12)


def test_hyperplane_distances():
    assert hyperplane_distance(E2, (0, 0), Hyperplane(E2, (1, 0), 1.0)) == pytest.approx(1.0)
    x = (math.cosh(2), math.sinh(2), 0.0)
    assert hyperplane_distance(H2, x, Hyperplane(H2, (0, 1, 0), 0.0)) == pytest.approx(2.0, rel=1e-12)
    assert hyperplane_distance(S2, (1, 0, 0), Hyperplane(S2, (1, 0, 0), 0.0)) == pytest.approx(math.pi / 2)


def test_affine_cross_ratio_strip_value():
    assert affine_cross_ratio(-1.0, 0.0, 0.5, 1.0) == pytest.approx(3.0)
    assert affine_cross_ratio(-1.0, 0.3, 0.3, 1.0) == pytest.approx(1.0)


@given(st.floats(0.0, 0.95))
def test_affine_cross_ratio_symbolic(x):
    value = affine_cross_ratio(-1.0, 0.0, x, 1.0)
    assert value == pytest.approx((1 + x) / (1 - x), rel=1e-12)


def _on_circle(theta):
    return np.array([math.cos(theta), math.sin(theta), 0.0])


def test_spherical_cross_ratio_examples():
    pts = [_on_circle(t) for t in (0.0, math.pi / 6, math.pi / 3, math.pi / 2)]
    assert spherical_cross_ratio(*pts) == pytest.approx(3.0, rel=1e-12)
    a = _on_circle(0.2)
    assert spherical_cross_ratio(a, _on_circle(0.9), _on_circle(1.7), -a) == pytest.approx(1.0, rel=1e-12)
    p = _on_circle(0.5)
    assert spherical_cross_ratio(_on_circle(0.0), p, p, _on_circle(2.0)) == pytest.approx(1.0)


@settings(max_examples=60)
@given(st.lists(st.floats(0.0, 2.5), min_size=4, max_size=4, unique=True))
def test_spherical_cross_ratio_sine_oracle(angles):
    angles = sorted(angles)
    if min(np.diff(angles)) < 1e-3:
        return
    pts = [_on_circle(t) for t in angles]
    assert spherical_cross_ratio(*pts) == pytest.approx(sine_cross_ratio(angles), rel=1e-9)


def test_klein_round_trip():
    y = np.array([0.3, -0.4])
    x = klein_to_hyperboloid(y)
    assert minkowski(x, x) == pytest.approx(-1.0)
    assert np.allclose(hyperboloid_to_klein(x), y)
