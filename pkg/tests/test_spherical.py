from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import desitter_point, desitter_sphere_image, sine_cross_ratio
from timelike.bodies import Ball
from timelike.errors import NullChordError, ProjectionDomainError
from timelike.geometry import Chart, spherical_cross_ratio
from timelike.order import PairClass, SphericalHilbertContext, classify_pair
from timelike.spherical import (
    desitter_context,
    desitter_curve_point,
    desitter_distance,
    desitter_isometry_check,
    desitter_project,
    gnomonic_lift,
    gnomonic_project,
    null_directions,
    planar_cross_ratio,
    random_lorentz,
    spherical_hilbert_distance,
)

S1 = Chart("spherical", 1)
S2 = Chart("spherical", 2)


def test_desitter_chord_value_two():
    ctx = desitter_context(1)
    p, q = desitter_sphere_image(0.0)[:2], desitter_sphere_image(1.0)[:2]
    assert spherical_hilbert_distance(ctx, p, q).distance == pytest.approx(2.0, abs=1e-12)


def test_desitter_chord_value_two_on_s2():
    ctx = desitter_context(2)
    p, q = desitter_sphere_image(0.0), desitter_sphere_image(1.0)
    assert spherical_hilbert_distance(ctx, p, q).distance == pytest.approx(2.0, abs=1e-12)


def _tangent_circle_points():
    n = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
    u = np.array([0.0, 1.0, 0.0])
    w = np.cross(n, u)
    return [math.cos(s) * u + math.sin(s) * w for s in (1.0, 0.4, -0.3)]


def test_tangent_chord_is_null_in_projective_context():
    ctx = desitter_context(2)
    a, b, _ = _tangent_circle_points()
    value = spherical_hilbert_distance(ctx, a, b)
    assert value.null
    assert value.distance == pytest.approx(0.0, abs=1e-9)


def test_tangent_chord_is_an_error_without_the_projective_quotient():
    e0 = np.array([1.0, 0.0, 0.0])
    ctx = SphericalHilbertContext(Ball(S2, -e0, math.pi / 4), Ball(S2, e0, math.pi / 4))
    a, b, _ = _tangent_circle_points()
    with pytest.raises(NullChordError):
        spherical_hilbert_distance(ctx, a, b)


def test_zero_distance():
    ctx = desitter_context(2)
    p = desitter_sphere_image(0.4)
    assert spherical_hilbert_distance(ctx, p, p).distance == 0.0


def test_rotation_invariance():
    rng = np.random.default_rng(1)
    ctx = desitter_context(2)
    p, q = desitter_sphere_image(0.2), desitter_sphere_image(0.9)
    base = spherical_hilbert_distance(ctx, p, q).distance
    for _ in range(10):
        m, r = np.linalg.qr(rng.standard_normal((3, 3)))
        m = m * np.sign(np.diag(r))
        moved = SphericalHilbertContext(ctx.past.transformed(m), ctx.future.transformed(m))
        assert spherical_hilbert_distance(moved, m @ p, m @ q).distance == pytest.approx(base, abs=1e-9)


def test_gnomonic_examples():
    assert np.allclose(gnomonic_project((1, 0, 0)), (1, 0, 0))
    assert np.allclose(gnomonic_project(np.array([1, 1, 0]) / math.sqrt(2)), (1, 1, 0))
    for theta in np.linspace(0, 2 * math.pi, 9):
        x = math.cos(math.pi / 4) * np.array([1, 0, 0]) + math.sin(math.pi / 4) * np.array([0, math.cos(theta), math.sin(theta)])
        y = gnomonic_project(x)
        assert np.linalg.norm(y[1:]) == pytest.approx(1.0)
        assert np.allclose(gnomonic_lift(y), x)


def test_gnomonic_preserves_cross_ratio():
    n = np.array([0.3, 0.2, -0.9])
    n /= np.linalg.norm(n)
    u = np.cross(n, [0.0, 0.0, 1.0])
    u /= np.linalg.norm(u)
    w = np.cross(n, u)
    angles = [0.1, 0.5, 0.8, 1.3]
    pts = [math.cos(a) * u + math.sin(a) * w for a in angles]
    pts = [x if x[0] > 0 else -x for x in pts]
    if not all(x[0] > 0.05 for x in pts):
        pytest.skip("configuration leaves the hemisphere")
    planar = planar_cross_ratio(*(gnomonic_project(x) for x in pts))
    assert abs(planar) == pytest.approx(abs(spherical_cross_ratio(*pts)), rel=1e-9)


def test_desitter_project_examples():
    with pytest.raises(ProjectionDomainError):
        desitter_project(desitter_curve_point(0.0))
    y = desitter_project(desitter_curve_point(1.0))
    assert y == pytest.approx([1.0, 1.0 / math.tanh(1.0)])
    assert desitter_project([1.0, 1.0]) == pytest.approx([1.0, 1.0])
    assert desitter_project([1.0, -1.0]) == pytest.approx([1.0, -1.0])


def test_desitter_distance_examples():
    assert desitter_distance(desitter_curve_point(0.0), desitter_curve_point(1.0)) == pytest.approx(1.0, abs=1e-12)
    p = desitter_curve_point(0.7)
    assert desitter_distance(p, p) == 0.0
    rng = np.random.default_rng(4)
    p3, q3 = desitter_curve_point(0.2, 2), desitter_curve_point(1.1, 2)
    for _ in range(20):
        m = random_lorentz(rng, 2, 0.8)
        assert desitter_distance(m @ p3.vector, m @ q3.vector) == pytest.approx(0.9, abs=1e-9)


def test_desitter_distance_arccosh_oracle():
    for t1, t2 in ((0.1, 0.4), (0.3, 2.0), (1.0, 1.000001)):
        p, q = desitter_point(t1), desitter_point(t2)
        inner = -p[0] * q[0] + p[1] * q[1]
        # arccosh loses about half the digits for close points; t2 - t1 does not
        assert desitter_distance(p, q) == pytest.approx(math.acosh(inner), rel=1e-3)
        assert desitter_distance(p, q) == pytest.approx(t2 - t1, rel=1e-9)


def test_isometry_check_example():
    report = desitter_isometry_check([(desitter_curve_point(0.3), desitter_curve_point(1.7))])
    assert report.distances[0] == pytest.approx(1.4, abs=1e-12)
    assert report.hilbert[0] == pytest.approx(2.8, abs=1e-11)
    assert report.ratios[0] == pytest.approx(2.0, abs=1e-11)
    assert report.factor_holds and report.alternative_rejected
    assert "inconsistent" in report.summary()
    p = desitter_curve_point(0.5)
    same = desitter_isometry_check([(p, p)])
    assert same.distances == [0.0] and same.hilbert == [0.0]


def test_null_directions_on_equator():
    ctx = desitter_context(2)
    p = np.array([0.0, 1.0, 0.0])
    u1, u2 = null_directions(ctx, p)
    # symmetric about the meridian plane spanned by e0 and p
    assert u1[0] == pytest.approx(u2[0]) and u1[2] == pytest.approx(-u2[2])
    assert abs(u1[2]) > 1e-6
    for u in (u1, u2):
        q = math.cos(0.3) * p + math.sin(0.3) * u
        assert classify_pair(ctx, p, q) == PairClass.NULL
        inward = u + 1e-3 * np.array([1.0, 0.0, 0.0])
        inward -= np.dot(inward, p) * p
        inward /= np.linalg.norm(inward)
        q = math.cos(0.3) * p + math.sin(0.3) * inward
        assert classify_pair(ctx, p, q) == PairClass.TIMELIKE


def test_null_directions_collapse_near_cap():
    ctx = desitter_context(2)
    angle = math.pi / 4 + 1e-6
    p = np.array([math.cos(angle), math.sin(angle), 0.0])
    u1, u2 = null_directions(ctx, p)
    boundary_tangent = np.array([0.0, 0.0, 1.0])
    assert min(abs(np.dot(u1, boundary_tangent)), abs(np.dot(u2, boundary_tangent))) > 0.99


def test_sine_oracle_matches_spherical_cross_ratio_on_s1():
    angles = [0.2, 0.6, 1.0, 2.0]
    pts = [np.array([math.cos(a), math.sin(a)]) for a in angles]
    assert spherical_cross_ratio(*pts) == pytest.approx(sine_cross_ratio(angles), rel=1e-12)
