"""Spherical timelike Hilbert metric, the projective quotient and de Sitter space.

On the sphere the Hilbert distance is the log of the sine cross ratio of the
chord ``(a1, p, q, a2)``.  The projective model pairs a past body ``K`` with its
antipode ``-K``; chords tangent to ``K`` are null.  The de Sitter pseudo-sphere
``{<x, x>_M = 1}`` embeds in that model through central projection onto
``{x0 = 1}`` followed by the inverse gnomonic projection, and the embedding
doubles distances: ``H = 2 d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import Ball, HPolytope, antipodal_body
from .errors import (
    CoordinateDomainError,
    DomainError,
    NotInFutureError,
    NotTimelikeSeparatedError,
    NullChordError,
    PreconditionError,
    ProjectionDomainError,
    TimelikeError,
    UnsupportedRepresentationError,
)
from .geometry import Chart, GeodesicRay, minkowski, spherical_cross_ratio
from .order import (
    PairClass,
    ProjectiveDeSitterContext,
    SphericalHilbertContext,
    _plane_basis,
    _same,
    classify_pair,
)

__all__ = [
    "DeSitterPoint",
    "DeSitterReport",
    "SphericalHilbertValue",
    "antipodal_body",
    "desitter_context",
    "desitter_curve_point",
    "desitter_distance",
    "desitter_isometry_check",
    "desitter_project",
    "desitter_to_sphere",
    "gnomonic_lift",
    "gnomonic_project",
    "null_directions",
    "planar_cross_ratio",
    "random_lorentz",
    "spherical_hilbert_distance",
]

EQUATOR_TOL = 1e-9
DESITTER_TOL = 1e-9
TIMELIKE_MARGIN = 1e-12
ISOMETRY_TOL = 1e-9


@dataclass(frozen=True)
class SphericalHilbertValue:
    distance: float
    a1: np.ndarray | None = None
    p: np.ndarray | None = None
    q: np.ndarray | None = None
    a2: np.ndarray | None = None
    plane: np.ndarray | None = None
    null: bool = False


def _tangency_point(ctx: ProjectiveDeSitterContext, basis: np.ndarray) -> np.ndarray:
    """Point where the great circle spanned by ``basis`` touches the past body."""
    body = ctx.body
    if isinstance(body, Ball):
        proj = basis.T @ (basis @ body.center)
        return proj / np.linalg.norm(proj)
    best = None
    for base, direction in ((basis[0], basis[1]), (-basis[0], -basis[1])):
        t_in, t_out, i_in, i_out = body._clip(GeodesicRay(ctx.chart, base, direction))
        if i_in is None and i_out is None:
            continue
        width = t_in - t_out
        if best is None or abs(width) < abs(best[0]):
            t = 0.5 * (t_in + t_out)
            best = (width, math.cos(t) * base + math.sin(t) * direction)
    if best is None:
        raise NullChordError("the great circle does not approach the body")
    return best[1]


def spherical_hilbert_distance(ctx: SphericalHilbertContext, p, q) -> SphericalHilbertValue:
    """``log [a1, p, q, a2]`` with the sine cross ratio.

    For a projective context a chord tangent to the body is null: the value
    reported is the log cross ratio with the antipodal contact points as
    endpoints, which is zero up to rounding, and ``null`` is set.  Tangent
    chords in other spherical contexts raise :class:`NullChordError`.
    """
    if not isinstance(ctx, SphericalHilbertContext):
        raise UnsupportedRepresentationError("expected a spherical Hilbert context")
    p = ctx.chart.point(p)
    q = ctx.chart.point(q)
    if _same(p, q):
        ctx._require(p)
        return SphericalHilbertValue(0.0, p=p, q=q)
    chord = ctx.chord(p, q)
    basis = _plane_basis(p, q)
    if chord is not None:
        a1, a2 = chord.past_hit.point, chord.future_hit.point
        value = math.log(spherical_cross_ratio(a1, p, q, a2))
        return SphericalHilbertValue(value, a1, p, q, a2, basis)
    if isinstance(ctx, ProjectiveDeSitterContext):
        if classify_pair(ctx, p, q) == PairClass.NULL:
            b = _tangency_point(ctx, basis)
            value = math.log(spherical_cross_ratio(b, p, q, -b))
            return SphericalHilbertValue(value, b, p, q, -b, basis, null=True)
        raise NotInFutureError("q is not in the future of p")
    fwd = ctx.future._first_hit(GeodesicRay.from_direction(ctx.chart, p, q - p))
    back = ctx.past._first_hit(GeodesicRay.from_direction(ctx.chart, q, p - q))
    if (fwd is not None and not fwd.transversal) or (back is not None and not back.transversal):
        raise NullChordError("the chord through p and q is tangent to a body")
    raise NotInFutureError("q is not in the future of p")


def _vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size < 2 or not np.all(np.isfinite(x)):
        raise CoordinateDomainError("expected a finite vector with at least two coordinates")
    return x


def gnomonic_project(x) -> np.ndarray:
    """Upper-hemisphere point to the affine chart ``{x0 = 1}``."""
    x = Chart("spherical", _vector(x).size - 1).point(x)
    if x[0] <= EQUATOR_TOL:
        raise ProjectionDomainError("gnomonic projection needs x0 > 0")
    return x / x[0]


def gnomonic_lift(y) -> np.ndarray:
    """Point of ``{x0 = 1}`` back to the upper hemisphere."""
    y = _vector(y)
    if abs(y[0] - 1.0) > 1e-12:
        raise ProjectionDomainError("lifted points must have x0 = 1")
    return y / np.linalg.norm(y)


def planar_cross_ratio(a1, p, q, a2) -> float:
    """Signed cross ratio of four collinear points of an affine chart.

    Signed coordinates along the line keep the value meaningful when the
    configuration wraps through the line at infinity.
    """
    a1, p, q, a2 = (np.asarray(x, dtype=float) for x in (a1, p, q, a2))
    span = a2 - a1
    length = float(np.linalg.norm(span))
    if length == 0.0:
        raise DomainError("a1 and a2 coincide")
    axis = span / length
    s1, sp, sq, s2 = (float(np.dot(x - a1, axis)) for x in (a1, p, q, a2))
    return (sp - s2) * (sq - s1) / ((sq - s2) * (sp - s1))


@dataclass(frozen=True)
class DeSitterPoint:
    """Point of the pseudo-sphere ``<x, x>_M = 1``."""

    vector: np.ndarray

    def __post_init__(self):
        x = _vector(self.vector)
        if abs(minkowski(x, x) - 1.0) > DESITTER_TOL:
            raise CoordinateDomainError("de Sitter points satisfy <x, x>_M = 1")
        object.__setattr__(self, "vector", x)


def desitter_curve_point(t: float, dimension: int = 1) -> DeSitterPoint:
    """``(sinh t, cosh t, 0, ...)``: unit-speed timelike geodesic parameter ``t``."""
    x = np.zeros(dimension + 1)
    x[0], x[1] = math.sinh(t), math.cosh(t)
    return DeSitterPoint(x)


def _as_desitter(x) -> np.ndarray:
    return x.vector if isinstance(x, DeSitterPoint) else DeSitterPoint(x).vector


def desitter_project(x) -> np.ndarray:
    """Central projection ``x -> x / x0`` onto ``{x0 = 1}``.

    Accepts de Sitter points and null (asymptotic) directions.
    """
    if isinstance(x, DeSitterPoint):
        x = x.vector
    x = _vector(x)
    form = minkowski(x, x)
    scale = float(np.dot(x, x))
    if abs(form - 1.0) > DESITTER_TOL and abs(form) > DESITTER_TOL * scale:
        raise CoordinateDomainError("expected a de Sitter point or a null direction")
    if abs(x[0]) <= EQUATOR_TOL:
        raise ProjectionDomainError("the ray through x is parallel to {x0 = 1}")
    return x / x[0]


def desitter_to_sphere(x) -> np.ndarray:
    return gnomonic_lift(desitter_project(x))


def desitter_distance(p, q) -> float:
    """Lorentzian length of the timelike geodesic from ``p`` to ``q``."""
    p, q = _as_desitter(p), _as_desitter(q)
    if p.shape != q.shape:
        raise CoordinateDomainError("points have different dimensions")
    if _same(p, q):
        return 0.0
    # <q-p, q-p>_M = 2 - 2<p, q>_M = -4 sinh^2(d/2), stable for close points
    diff = q - p
    gap = -minkowski(diff, diff)
    if not gap > TIMELIKE_MARGIN * float(np.dot(diff, diff)) or not q[0] > p[0]:
        raise NotTimelikeSeparatedError("q is not in the timelike future of p")
    return 2.0 * math.asinh(math.sqrt(gap) / 2.0)


def desitter_context(dimension: int = 1) -> ProjectiveDeSitterContext:
    """Caps of radius pi/4 at ``-e0`` (past) and ``e0`` (future)."""
    chart = Chart("spherical", dimension)
    e0 = np.zeros(dimension + 1)
    e0[0] = 1.0
    return ProjectiveDeSitterContext(Ball(chart, -e0, math.pi / 4))


def random_lorentz(rng, dimension: int = 2, max_rapidity: float = 1.0) -> np.ndarray:
    """Random element of the identity component of ``SO(dimension, 1)``.

    A spatial rotation composed with a boost along a random spatial axis.
    """
    n = dimension
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    rotation = np.eye(n + 1)
    rotation[1:, 1:] = q
    axis = rng.standard_normal(n)
    axis /= np.linalg.norm(axis)
    eta = rng.uniform(-max_rapidity, max_rapidity)
    boost = np.eye(n + 1)
    boost[0, 0] = math.cosh(eta)
    boost[0, 1:] = boost[1:, 0] = math.sinh(eta) * axis
    boost[1:, 1:] += (math.cosh(eta) - 1.0) * np.outer(axis, axis)
    return boost @ rotation


@dataclass
class DeSitterReport:
    distances: list[float] = field(default_factory=list)
    hilbert: list[float] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)
    max_relative_deviation: float = 0.0
    alternative_max_deviation: float = 0.0
    cross_ratio_max_deviation: float = 0.0
    tolerance: float = ISOMETRY_TOL

    @property
    def factor_holds(self) -> bool:
        return self.max_relative_deviation <= self.tolerance and self.cross_ratio_max_deviation <= self.tolerance

    @property
    def alternative_rejected(self) -> bool:
        return self.alternative_max_deviation > self.tolerance

    def summary(self) -> str:
        lines = [
            f"pairs: {len(self.distances)}",
            f"H = 2 d: max relative deviation {self.max_relative_deviation:.3e} "
            f"({'holds' if self.factor_holds else 'FAILS'})",
            f"d = 2 H reading: max relative deviation {self.alternative_max_deviation:.3e} "
            f"({'inconsistent with the computed values' if self.alternative_rejected else 'not rejected'})",
            f"cross ratio preservation: max deviation {self.cross_ratio_max_deviation:.3e}",
        ]
        return "\n".join(lines)


def desitter_isometry_check(pairs, tolerance: float = ISOMETRY_TOL) -> DeSitterReport:
    """Compare ``desitter_distance`` with the spherical Hilbert distance of the images."""
    pairs = [(_as_desitter(p), _as_desitter(q)) for p, q in pairs]
    report = DeSitterReport(tolerance=tolerance)
    contexts: dict[int, ProjectiveDeSitterContext] = {}
    for p, q in pairs:
        n = p.size - 1
        ctx = contexts.setdefault(n, desitter_context(n))
        d = desitter_distance(p, q)
        pt, qt = desitter_to_sphere(p), desitter_to_sphere(q)
        value = spherical_hilbert_distance(ctx, pt, qt)
        h = value.distance
        report.distances.append(d)
        report.hilbert.append(h)
        if d == 0.0:
            report.ratios.append(math.nan)
            if h != 0.0:
                report.max_relative_deviation = max(report.max_relative_deviation, abs(h))
            continue
        report.ratios.append(h / d)
        report.max_relative_deviation = max(report.max_relative_deviation, abs(h - 2.0 * d) / (2.0 * d))
        report.alternative_max_deviation = max(report.alternative_max_deviation, abs(h - 0.5 * d) / (0.5 * d))
        # the past endpoint lives on the lower cap; its antipode is its projective image
        images = [gnomonic_project(-value.a1), gnomonic_project(pt), gnomonic_project(qt), gnomonic_project(value.a2)]
        planar = planar_cross_ratio(*images)
        spherical = spherical_cross_ratio(value.a1, pt, qt, value.a2)
        report.cross_ratio_max_deviation = max(
            report.cross_ratio_max_deviation, abs(planar - spherical) / abs(spherical)
        )
    return report


def null_directions(ctx: ProjectiveDeSitterContext, p, count: int = 16) -> list[np.ndarray]:
    """Future-directed null directions at ``p``: great circles tangent to ``-K``.

    On ``S^2`` there are exactly two.  In higher dimensions the cone is
    sampled at ``count`` evenly spread directions.  Caps only.
    """
    if not isinstance(ctx, ProjectiveDeSitterContext):
        raise UnsupportedRepresentationError("null directions need a projective de Sitter context")
    if not isinstance(ctx.body, Ball):
        raise UnsupportedRepresentationError("closed-form null directions are available for caps")
    (p,) = ctx._require(p)
    future = ctx.future
    c, r = future.center, future.radius
    alpha = float(np.dot(c, p))
    tangential = c - alpha * p
    beta = float(np.linalg.norm(tangential))
    cr = math.cos(r)
    if not abs(alpha) < cr or beta == 0.0:
        raise PreconditionError("p must lie strictly outside both caps")
    e = tangential / beta
    cos_phi = math.sqrt(cr * cr - alpha * alpha) / beta
    sin_phi = math.sqrt(max(1.0 - cos_phi * cos_phi, 0.0))
    # orthonormal basis of the tangent directions orthogonal to e
    frame = np.vstack([p, e])
    _, _, vt = np.linalg.svd(frame)
    perp = vt[2:]
    if perp.shape[0] == 1:
        sides = [perp[0], -perp[0]]
    else:
        angles = 2.0 * math.pi * np.arange(count) / count
        sides = [math.cos(a) * perp[0] + math.sin(a) * perp[1] for a in angles]
    out = []
    for w in sides:
        u = cos_phi * e + sin_phi * w
        residual = cr - float(np.linalg.norm(_plane_basis(p, p + u) @ c))
        if abs(residual) > EQUATOR_TOL:
            raise TimelikeError(f"null direction failed its tangency certificate ({residual:.3e})")
        out.append(u)
    return out
