"""Seeded random instances shared by the property suites, tests and CLI.

Every generator takes a ``numpy.random.Generator`` and is deterministic for a
fixed seed.  Point generators return ``None`` when a draw lands in a
degenerate configuration; callers simply draw again.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import Ball, ConvexBody, HPolytope
from .geometry import Chart, GeodesicRay, klein_to_hyperboloid
from .order import (
    FunkContext,
    HilbertContext,
    ProjectiveDeSitterContext,
    SphericalHilbertContext,
)

EXTERIOR_RADIUS = {"euclidean": 4.0, "hyperbolic": 3.0}


def random_unit(rng, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_rotation(rng, n: int) -> np.ndarray:
    """Haar-random special orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_euclidean_polytope(rng, dimension: int, bounded: bool = False) -> HPolytope:
    """Random polytope containing the origin; possibly unbounded unless ``bounded``."""
    chart = Chart("euclidean", dimension)
    count = int(rng.integers(dimension + 1, dimension + 6))
    faces = [(random_unit(rng, dimension), rng.uniform(0.5, 1.5)) for _ in range(count)]
    if bounded:
        for i in range(dimension):
            for sign in (1.0, -1.0):
                e = np.zeros(dimension)
                e[i] = sign
                faces.append((e, 1.5))
    return HPolytope(chart, faces)


def random_euclidean_ball(rng, dimension: int) -> Ball:
    chart = Chart("euclidean", dimension)
    return Ball(chart, rng.uniform(-0.5, 0.5, dimension), rng.uniform(0.5, 1.5))


def random_hyperbolic_polytope(rng, dimension: int) -> HPolytope:
    """Faces ``{u . y < rho}`` in Klein coordinates around the origin."""
    chart = Chart("hyperbolic", dimension)
    count = int(rng.integers(dimension + 1, dimension + 6))
    faces = []
    for _ in range(count):
        u = random_unit(rng, dimension)
        rho = rng.uniform(0.2, 0.8)
        faces.append((np.concatenate(([rho], u)), 0.0))
    return HPolytope(chart, faces)


def random_hyperbolic_ball(rng, dimension: int) -> Ball:
    chart = Chart("hyperbolic", dimension)
    y = random_unit(rng, dimension) * rng.uniform(0.0, 0.3)
    return Ball(chart, klein_to_hyperboloid(y), rng.uniform(0.3, 1.2))


def random_body(rng, kind: str, dimension: int, shape: str | None = None) -> ConvexBody:
    shape = shape or ("ball" if rng.random() < 0.5 else "hpolytope")
    if kind == "euclidean":
        return random_euclidean_ball(rng, dimension) if shape == "ball" else random_euclidean_polytope(rng, dimension)
    if kind == "hyperbolic":
        return random_hyperbolic_ball(rng, dimension) if shape == "ball" else random_hyperbolic_polytope(rng, dimension)
    raise ValueError(f"no random Funk bodies for chart {kind!r}")


def exterior_point(rng, body: ConvexBody) -> np.ndarray:
    radius = EXTERIOR_RADIUS[body.chart.kind]
    return body.sample_exterior(rng, 1, radius)[0]


def future_point(rng, ctx: FunkContext, p, lo: float = 0.05, hi: float = 0.95, target=None):
    """A point strictly between ``p`` and the body along a ray aimed inside."""
    body = ctx.body
    if target is None:
        target = body.sample_interior(rng, 1)[0]
    ray = GeodesicRay.from_direction(ctx.chart, p, target - p)
    hit = body._first_hit(ray)
    if hit is None or not hit.transversal:
        return None
    q = ray.point(rng.uniform(lo, hi) * hit.t)
    return q if ctx.admissible(q) and ctx.precedes(p, q) else None


def funk_chain(rng, ctx: FunkContext, collinear: bool = False):
    """Ordered triple ``p < q < r`` (or ``None``)."""
    p = exterior_point(rng, ctx.body)
    if collinear:
        target = ctx.body.sample_interior(rng, 1)[0]
        ray = GeodesicRay.from_direction(ctx.chart, p, target - p)
        hit = ctx.body._first_hit(ray)
        if hit is None or not hit.transversal:
            return None
        s1, s2 = sorted(rng.uniform(0.05, 0.95, 2))
        if s2 - s1 < 0.01:
            return None
        q, r = ray.point(s1 * hit.t), ray.point(s2 * hit.t)
        if not (ctx.precedes(p, q) and ctx.precedes(q, r)):
            return None
        return p, q, r
    q = future_point(rng, ctx, p)
    if q is None:
        return None
    r = future_point(rng, ctx, q)
    if r is None:
        return None
    return p, q, r


def draw(rng, make, attempts: int = 200):
    """Call ``make(rng)`` until it returns something other than ``None``."""
    for _ in range(attempts):
        value = make(rng)
        if value is not None:
            return value
    raise RuntimeError("random generator kept producing degenerate draws")


def _bounded_polytope_at(rng, dimension: int, shift) -> HPolytope:
    body = random_euclidean_polytope(rng, dimension, bounded=True)
    scale_faces = [(f.normal, f.offset * 0.6) for f in body.faces]
    body = HPolytope(body.chart, scale_faces)
    return body.transformed(np.eye(dimension), np.asarray(shift, dtype=float))


def random_hilbert_context(rng, kind: str, dimension: int, shape: str | None = None):
    """Disjoint past and future bodies on either side of the origin."""
    shape = shape or ["ball", "hpolytope", "strip"][int(rng.integers(0, 3))]
    if kind == "euclidean":
        chart = Chart("euclidean", dimension)
        axis = np.zeros(dimension)
        axis[0] = 1.0
        if shape == "strip":
            w1, w2 = rng.uniform(0.5, 1.5, 2)
            past = HPolytope(chart, [(axis, -w1)])
            future = HPolytope(chart, [(-axis, -w2)])
        elif shape == "ball":
            past = Ball(chart, -2.0 * axis + rng.uniform(-0.3, 0.3, dimension), rng.uniform(0.4, 1.2))
            future = Ball(chart, 2.0 * axis + rng.uniform(-0.3, 0.3, dimension), rng.uniform(0.4, 1.2))
        else:
            past = _bounded_polytope_at(rng, dimension, -2.0 * axis)
            future = _bounded_polytope_at(rng, dimension, 2.0 * axis)
        return HilbertContext(past, future)
    if kind == "hyperbolic":
        chart = Chart("hyperbolic", dimension)
        axis = np.zeros(dimension)
        axis[0] = 1.0
        if shape == "ball":
            past = Ball(chart, klein_to_hyperboloid(-0.6 * axis), rng.uniform(0.2, 0.5))
            future = Ball(chart, klein_to_hyperboloid(0.6 * axis), rng.uniform(0.2, 0.5))
        else:
            rho1, rho2 = rng.uniform(0.2, 0.6, 2)
            # Klein half-spaces {y1 < -rho1} and {y1 > rho2}
            past = HPolytope(chart, [(np.concatenate(([-rho1], axis)), 0.0)])
            future = HPolytope(chart, [(np.concatenate(([-rho2], -axis)), 0.0)])
        return HilbertContext(past, future)
    if kind == "spherical":
        chart = Chart("spherical", dimension)
        theta = rng.uniform(0.7, 1.2)
        r1, r2 = rng.uniform(0.2, 0.5, 2)
        base = np.zeros(dimension + 1)
        c1, c2 = base.copy(), base.copy()
        c1[0], c1[1] = math.cos(theta), -math.sin(theta)
        c2[0], c2[1] = math.cos(theta), math.sin(theta)
        rot = random_rotation(rng, dimension + 1)
        return SphericalHilbertContext(Ball(chart, rot @ c1, r1), Ball(chart, rot @ c2, r2))
    if kind == "projective_desitter":
        chart = Chart("spherical", dimension)
        c = random_unit(rng, dimension + 1)
        return ProjectiveDeSitterContext(Ball(chart, c, rng.uniform(0.3, 1.2)))
    raise ValueError(f"unknown Hilbert context kind {kind!r}")


def _chord_ray(rng, ctx):
    """A geodesic from an interior point of the past body through one of the future body."""
    x1 = ctx.past.sample_interior(rng, 1)[0]
    x2 = ctx.future.sample_interior(rng, 1)[0]
    if np.allclose(x1, x2) or np.allclose(x1, -x2):
        return None
    ray = GeodesicRay.from_direction(ctx.chart, x1, x2 - x1)
    t_a = ctx.past._exit(ray)
    hit = ctx.future._first_hit(GeodesicRay.from_direction(ctx.chart, ray.point(t_a), ray.tangent(t_a)))
    if hit is None or not hit.transversal:
        return None
    return ray, t_a, t_a + hit.t


def hilbert_point(rng, ctx):
    """Admissible point lying on some chord from the past body to the future body."""
    chord = _chord_ray(rng, ctx)
    if chord is None:
        return None
    ray, t_a, t_b = chord
    p = ray.point(t_a + rng.uniform(0.05, 0.95) * (t_b - t_a))
    return p if ctx.admissible(p) else None


def hilbert_future_point(rng, ctx, p):
    target = ctx.future.sample_interior(rng, 1)[0]
    if np.allclose(target, p) or np.allclose(target, -p):
        return None
    ray = GeodesicRay.from_direction(ctx.chart, p, target - p)
    hit = ctx.future._first_hit(ray)
    if hit is None or not hit.transversal:
        return None
    q = ray.point(rng.uniform(0.05, 0.95) * hit.t)
    return q if ctx.admissible(q) and ctx.precedes(p, q) else None


def hilbert_chain(rng, ctx, collinear: bool = False):
    if collinear:
        chord = _chord_ray(rng, ctx)
        if chord is None:
            return None
        ray, t_a, t_b = chord
        s = np.sort(rng.uniform(0.05, 0.95, 3))
        if np.min(np.diff(s)) < 0.01:
            return None
        p, q, r = (ray.point(t_a + x * (t_b - t_a)) for x in s)
        if not (ctx.precedes(p, q) and ctx.precedes(q, r)):
            return None
        return p, q, r
    p = hilbert_point(rng, ctx)
    if p is None:
        return None
    q = hilbert_future_point(rng, ctx, p)
    if q is None:
        return None
    r = hilbert_future_point(rng, ctx, q)
    if r is None:
        return None
    return p, q, r
