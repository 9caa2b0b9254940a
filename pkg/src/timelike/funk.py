"""Timelike Funk distance and its Minkowski functional.

Two independent routes are implemented for each quantity:

* the *boundary-hit* route follows the ray from ``p`` through ``q`` to the
  body, ``F = log(k d(p, b) / k d(q, b))`` with the chart kernel ``k``;
* the *variational* route minimizes ``log(k d(p, pi) / k d(q, pi))`` over the
  supporting hyperplanes separating ``q`` from the body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    EXTERIOR,
    HPolytope,
    RayHit,
    all_planes_infimum,
    ratio_infimum,
)
from .errors import (
    DomainError,
    NotInFutureError,
    NotTimelikeDirectionError,
    PreconditionError,
    TimelikeError,
    UnsupportedChartError,
    UnsupportedRepresentationError,
)
from .geometry import Chart, GeodesicRay, Hyperplane, minkowski
from .order import FunkContext, _same

TANGENT_TOL = 1e-9
SPHERE_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class FunkValue:
    distance: float
    hit: RayHit | None = None
    plane: Hyperplane | None = None
    separation: float = 0.0


@dataclass(frozen=True)
class FinslerValue:
    value: float
    t_star: float | None = None


def _funk_ctx(ctx) -> FunkContext:
    if not isinstance(ctx, FunkContext):
        raise UnsupportedRepresentationError("expected a Funk context")
    return ctx


def funk_distance(ctx: FunkContext, p, q) -> FunkValue:
    ctx = _funk_ctx(ctx)
    p = ctx.chart.point(p)
    q = ctx.chart.point(q)
    if _same(p, q):
        ctx._require(p)
        return FunkValue(0.0)
    d, hit = ctx.hit(p, q)
    if not ctx.precedes(p, q):
        raise NotInFutureError("q is not in the future of p")
    value = ctx.chart.kernel_log_ratio(hit.t, d)
    return FunkValue(value, hit=hit, plane=hit.plane, separation=d)


def funk_distance_variational(ctx: FunkContext, p, q, family: str = "q") -> FunkValue:
    """Variational Funk distance.

    ``family="q"`` minimizes over the planes separating ``q`` (the default,
    and the one equal to :func:`funk_distance`).  ``family="p"`` minimizes over
    the planes separating ``p`` instead, with unsigned distances; it is a
    polytope-only diagnostic and may fall below the true value on compact
    bodies.
    """
    ctx = _funk_ctx(ctx)
    p = ctx.chart.point(p)
    q = ctx.chart.point(q)
    if _same(p, q):
        ctx._require(p)
        return FunkValue(0.0)
    if not ctx.precedes(p, q):
        raise NotInFutureError("q is not in the future of p")
    if family == "q":
        value, plane = ratio_infimum(ctx.body, p, q)
        return FunkValue(value, plane=plane)
    if family == "p":
        body = ctx.body
        if not isinstance(body, HPolytope):
            raise UnsupportedRepresentationError("the p-family diagnostic needs a polytope")
        best, arg = math.inf, None
        for plane in body.separating_faces(p):
            sq = abs(plane.signed(q))
            value = math.inf if sq == 0.0 else math.log(plane.signed(p) / sq)
            if value < best:
                best, arg = value, plane
        return FunkValue(best, plane=arg)
    raise ValueError("family must be 'p' or 'q'")


def funk_all_planes_diagnostic(ctx: FunkContext, p, q) -> dict:
    """Compare the separating-family infimum with the infimum over every face."""
    ctx = _funk_ctx(ctx)
    separating = funk_distance_variational(ctx, p, q).distance
    everything = all_planes_infimum(ctx.body, p, q)
    return {"separating": separating, "all_planes": everything, "difference": separating - everything}


def _check_tangent(chart: Chart, p, v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (chart.ambient_dim,):
        raise DomainError("tangent vector has the wrong length")
    if chart.kind == "euclidean":
        return v
    pairing = minkowski(p, v) if chart.kind == "hyperbolic" else float(np.dot(p, v))
    if abs(pairing) > TANGENT_TOL * max(1.0, float(np.linalg.norm(v)) * float(np.linalg.norm(p))):
        raise DomainError("vector is not tangent to the chart at p")
    return chart.project_tangent(p, v)


def kernel_rate(body, chart: Chart, p, v) -> FinslerValue:
    """``|v| k'(t) / k(t)`` where ``t`` is the distance along ``v`` to the body.

    Shared by the Funk and Hilbert functionals; raises when the ray along ``v``
    misses the body or meets it tangentially.
    """
    v = _check_tangent(chart, p, v)
    norm = chart.tangent_norm(p, v)
    if norm == 0.0:
        return FinslerValue(0.0, None)
    ray = GeodesicRay.from_direction(chart, p, v)
    hit = body._first_hit(ray)
    if hit is None or not hit.transversal:
        raise NotTimelikeDirectionError("the ray along v does not meet the body transversally")
    return FinslerValue(norm * chart.kernel_log_derivative(hit.t), hit.t)


def funk_functional(ctx: FunkContext, p, v) -> FinslerValue:
    ctx = _funk_ctx(ctx)
    (p,) = ctx._require(p)
    return kernel_rate(ctx.body, ctx.chart, p, v)


def funk_functional_variational(ctx: FunkContext, p, v) -> FinslerValue:
    """Infimum over faces separating ``p`` of the rate ``-D_v s(p) / s(p)``.

    ``s`` is the signed kernel distance to the face, so the ratio reads
    ``<v, eta> / d(p, pi)`` in the euclidean chart.
    """
    ctx = _funk_ctx(ctx)
    body = ctx.body
    if not isinstance(body, HPolytope):
        raise UnsupportedRepresentationError("the variational functional needs a polytope")
    (p,) = ctx._require(p)
    v = _check_tangent(ctx.chart, p, v)
    if ctx.chart.tangent_norm(p, v) == 0.0:
        return FinslerValue(0.0, None)
    # membership of v in the timelike cone is decided by the ray
    kernel_rate(body, ctx.chart, p, v)
    best = math.inf
    for face in body.separating_faces(p):
        best = min(best, -face.rate(v) / face.signed(p))
    return FinslerValue(best, None)


def dilate(p, b, r: float) -> np.ndarray:
    """Point at Funk distance ``r`` from ``p`` on the segment toward the hit ``b``."""
    shrink = math.exp(-r)
    return (1.0 - shrink) * np.asarray(b) + shrink * np.asarray(p)


def future_sphere_sample(ctx: FunkContext, p, r: float, count: int, directions=None, seed: int = 0):
    """Points at Funk distance ``r`` in the future of ``p`` (euclidean chart).

    Each point is a dilation of a visible boundary point toward ``p`` and is
    re-checked against :func:`funk_distance`.  Directions default to rays
    aimed at random interior points of the body.
    """
    ctx = _funk_ctx(ctx)
    if ctx.chart.kind != "euclidean":
        raise UnsupportedChartError("future spheres are sampled in the euclidean chart")
    if not r > 0.0:
        raise DomainError("radius must be positive")
    (p,) = ctx._require(p)
    if directions is None:
        rng = np.random.default_rng(seed)
        directions = [x - p for x in ctx.body.sample_interior(rng, count)]
    points = []
    for u in directions[:count]:
        hit = ctx.body._first_hit(GeodesicRay.from_direction(ctx.chart, p, u))
        if hit is None or not hit.transversal:
            raise NotTimelikeDirectionError("sample direction does not see the body transversally")
        q = dilate(p, hit.point, r)
        check = funk_distance(ctx, p, q).distance
        if abs(check - r) > SPHERE_CHECK_TOL * max(1.0, r):
            raise TimelikeError(f"future-sphere point re-evaluates to {check!r}, expected {r!r}")
        points.append(q)
    return points


def funk_monotonicity_check(inner, outer, p, q, samples: int = 1000, seed: int = 0):
    """Return ``(F, F_hat)`` for nested bodies ``inner`` inside ``outer``."""
    if inner.chart != outer.chart:
        raise PreconditionError("bodies live in different charts")
    rng = np.random.default_rng(seed)
    for b in inner.sample_boundary(rng, samples):
        if outer.contains(b) == EXTERIOR:
            raise PreconditionError("the outer body does not contain the inner one")
    small, big = FunkContext(inner), FunkContext(outer)
    if not (small.precedes(p, q) and big.precedes(p, q)):
        raise PreconditionError("q must be in the future of p for both bodies")
    f = funk_distance(small, p, q).distance
    f_hat = funk_distance(big, p, q).distance
    if f_hat < f - 1e-12:
        raise TimelikeError(f"monotonicity violated: {f_hat!r} < {f!r}")
    return f, f_hat


def second_differences(ctx: FunkContext, x, start, end, steps: int = 16) -> np.ndarray:
    """Second central differences of ``t -> F(s(t), x)`` on the segment ``s``.

    Every sampled ``s(t)`` must precede ``x``; the values should be <= 0.
    """
    ctx = _funk_ctx(ctx)
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    ts = np.linspace(0.0, 1.0, steps + 1)
    values = np.array([funk_distance(ctx, start + t * (end - start), x).distance for t in ts])
    return values[:-2] - 2.0 * values[1:-1] + values[2:]
