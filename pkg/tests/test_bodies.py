from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import funk_ball_grid
from timelike.bodies import Ball, HPolytope, antipodal_body, ratio_infimum, separating_hyperplanes
from timelike.errors import ValidationError
from timelike.geometry import Chart, GeodesicRay, Hyperplane

E2 = Chart("euclidean", 2)
S2 = Chart("spherical", 2)
H2 = Chart("hyperbolic", 2)


def unit_ball():
    return Ball(E2, (0, 0), 1.0)


def square():
    return HPolytope(E2, [((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)])


def test_contains():
    ball = unit_ball()
    assert ball.contains((0, 0)) == "interior"
    assert ball.contains((1, 0)) == "boundary"
    assert ball.contains((2, 0)) == "exterior"


def test_ball_first_hit_transversal():
    hit = unit_ball().ray_first_hit(GeodesicRay(E2, np.array([-2.0, 0.0]), np.array([1.0, 0.0])))
    assert hit.t == pytest.approx(1.0)
    assert np.allclose(hit.point, (-1, 0))
    assert hit.transversal


def test_square_first_hit():
    hit = square().ray_first_hit(GeodesicRay(E2, np.array([-2.0, 0.0]), np.array([1.0, 0.0])))
    assert hit.t == pytest.approx(1.0)
    assert np.allclose(hit.point, (-1, 0))
    assert hit.plane.same_as(Hyperplane(E2, (-1, 0), 1))


def test_tangent_ray_is_not_transversal():
    hit = unit_ball().ray_first_hit(GeodesicRay(E2, np.array([-2.0, 1.0]), np.array([1.0, 0.0])))
    assert hit is not None
    assert hit.t == pytest.approx(2.0, abs=1e-6)
    assert np.allclose(hit.point, (0, 1), atol=1e-6)
    assert not hit.transversal


def test_separating_faces():
    faces = list(separating_hyperplanes(square(), (-2, 0)))
    assert len(faces) == 1 and faces[0].same_as(Hyperplane(E2, (-1, 0), 1))
    assert len(separating_hyperplanes(square(), (-2, -2))) == 2


def test_ball_separating_family_visibility():
    family = separating_hyperplanes(unit_ball(), (-2.0, 0.0))
    for theta in np.linspace(0, 2 * math.pi, 73)[:-1]:
        b = np.array([math.cos(theta), math.sin(theta)])
        visible = math.cos(theta) < -0.5
        if abs(math.cos(theta) + 0.5) > 1e-9:
            assert family.visible(b) == visible


def test_ratio_infimum_examples():
    half = HPolytope(E2, [((-1, 0), -1)])
    value, plane = ratio_infimum(half, (0, 0), (0.5, 0))
    assert value == pytest.approx(math.log(2))
    assert plane.same_as(Hyperplane(E2, (-1, 0), -1))
    value, _ = ratio_infimum(unit_ball(), (-2, 0), (-1.5, 0))
    assert value == pytest.approx(math.log(2))
    assert ratio_infimum(unit_ball(), (-2, 0), (-2, 0))[0] == 0.0


def test_ratio_infimum_against_tangent_line_grid():
    p, q = np.array([-2.0, 0.3]), np.array([-1.4, 0.1])
    value, _ = ratio_infimum(unit_ball(), p, q)
    assert value == pytest.approx(funk_ball_grid(p, q, (0, 0), 1.0), abs=1e-8)


def test_duplicate_faces_removed():
    poly = HPolytope(E2, [((1, 0), 1), ((1, 0), 1 + 1e-14), ((-1, 0), 1)])
    assert len(poly.faces) == 2


def test_empty_polytope_rejected():
    with pytest.raises(ValidationError):
        HPolytope(E2, [((1, 0), -1), ((-1, 0), -1)])


def test_spherical_cap_needs_open_hemisphere():
    with pytest.raises(ValidationError):
        Ball(S2, (1, 0, 0), 2.0)


def test_antipodal_cap_and_involution():
    cap = Ball(S2, (1, 0, 0), math.pi / 4)
    anti = antipodal_body(cap)
    assert np.allclose(anti.center, (-1, 0, 0)) and anti.radius == cap.radius
    back = antipodal_body(anti)
    assert np.allclose(back.center, cap.center)


def test_antipodal_polytope():
    poly = HPolytope(S2, [((0, -1, 0), 0.0), ((0, 0, -1), 0.0), ((-1, 0, 0), 0.0)])
    anti = antipodal_body(poly)
    x = poly.interior_point
    assert anti.contains(-x) == "interior"
    assert antipodal_body(anti).contains(x) == "interior"


def test_hyperbolic_ball_contains():
    ball = Ball(H2, (1, 0, 0), 1.0)
    assert ball.contains((math.cosh(0.5), math.sinh(0.5), 0)) == "interior"
    assert ball.contains((math.cosh(2), math.sinh(2), 0)) == "exterior"


def test_samplers_land_where_requested():
    rng = np.random.default_rng(0)
    body = unit_ball()
    assert all(body.contains(x) == "interior" for x in body.sample_interior(rng, 20))
    assert all(body.contains(x) == "boundary" for x in body.sample_boundary(rng, 20))
    assert all(body.contains(x) == "exterior" for x in body.sample_exterior(rng, 20, 3.0))
