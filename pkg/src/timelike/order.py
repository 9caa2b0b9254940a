"""Timelike contexts and their order relations.

A context binds convex bodies to a chart:

* :class:`FunkContext`  one body; ``q`` is in the future of ``p`` when ``q``
  lies strictly between ``p`` and the point where the ray from ``p`` through
  ``q`` first meets the body, and that meeting is transversal.
* :class:`HilbertContext`  an ordered (past, future) pair of disjoint bodies
  in a euclidean or hyperbolic chart.
* :class:`SphericalHilbertContext`  the same on the sphere.
* :class:`ProjectiveDeSitterContext`  a spherical body ``K`` used as the past
  together with its antipode ``-K`` as the future; classification identifies
  ``x`` with ``-x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    CLIP_TOL,
    EXTERIOR,
    TRANSVERSAL_TOL,
    Ball,
    ConvexBody,
    HPolytope,
    RayHit,
    body_separation,
)
from .errors import (
    PreconditionError,
    UnsupportedChartError,
    UnsupportedRepresentationError,
    ValidationError,
)
from .geometry import Chart, GeodesicRay, chart_distance

DISJOINT_MIN = 1e-6
ARC_MARGIN = 1e-12


class PairClass(str, enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    UNRELATED = "unrelated"
    COINCIDENT = "coincident"


@dataclass(frozen=True)
class Chord:
    """Geodesic data shared by the Hilbert formulas for an ordered pair."""

    p: np.ndarray
    q: np.ndarray
    length: float
    future_hit: RayHit
    past_hit: RayHit


def _same(p, q) -> bool:
    return not np.any(np.asarray(p) - np.asarray(q))


def _forward_hit(body: ConvexBody, p, q) -> tuple[float, RayHit | None]:
    chart = body.chart
    ray = GeodesicRay.from_direction(chart, p, q - p)
    return chart_distance(chart, p, q), body._first_hit(ray)


def _strictly_before(d: float, hit: RayHit | None) -> bool:
    return hit is not None and hit.transversal and d < hit.t - CLIP_TOL


class FunkContext:
    kind = "funk"

    def __init__(self, body: ConvexBody):
        if body.chart.kind == "spherical":
            raise UnsupportedChartError(
                "no timelike Funk metric on the sphere: a great circle can meet the body twice"
            )
        self.body = body
        self.chart: Chart = body.chart

    def __repr__(self):
        return f"FunkContext({self.body!r})"

    def admissible(self, x) -> bool:
        return self.body.contains(x) == EXTERIOR

    def _require(self, *points):
        out = []
        for x in points:
            x = self.chart.point(x)
            if self.body.contains(x) != EXTERIOR:
                raise PreconditionError("points must lie outside the closed body")
            out.append(x)
        return out

    def hit(self, p, q) -> tuple[float, RayHit | None]:
        """Distance ``d(p, q)`` and the first hit of the ray from ``p`` through ``q``."""
        p, q = self._require(p, q)
        return _forward_hit(self.body, p, q)

    def precedes(self, p, q) -> bool:
        p, q = self._require(p, q)
        if _same(p, q):
            return False
        return _strictly_before(*_forward_hit(self.body, p, q))

    def cone_precedes(self, p, q) -> bool:
        """Literal cone reading: the ray from ``p`` through ``q`` meets the body
        transversally, wherever ``q`` sits on it."""
        p, q = self._require(p, q)
        if _same(p, q):
            return False
        _, hit = _forward_hit(self.body, p, q)
        return hit is not None and hit.transversal


class HilbertContext:
    kind = "hilbert"
    allowed_charts = ("euclidean", "hyperbolic")

    def __init__(self, past: ConvexBody, future: ConvexBody, check_disjoint: bool = True):
        if past.chart != future.chart:
            raise ValidationError("past and future bodies must share a chart")
        if past.chart.kind not in self.allowed_charts:
            raise UnsupportedChartError(f"{self.kind} contexts need a chart in {self.allowed_charts}")
        self.past = past
        self.future = future
        self.chart: Chart = past.chart
        if check_disjoint:
            gap = body_separation(past, future)
            if gap < DISJOINT_MIN:
                raise ValidationError(f"past and future bodies are not disjoint (gap {gap:.3g})")

    def __repr__(self):
        return f"{type(self).__name__}(past={self.past!r}, future={self.future!r})"

    def admissible(self, x) -> bool:
        return self.past.contains(x) == EXTERIOR and self.future.contains(x) == EXTERIOR

    def _require(self, *points):
        out = []
        for x in points:
            x = self.chart.point(x)
            if not self.admissible(x):
                raise PreconditionError("points must lie outside both closed bodies")
            out.append(x)
        return out

    def _arc_ok(self, d: float, t_future: float, t_past: float) -> bool:
        return True

    def chord(self, p, q) -> Chord | None:
        """The chord through an ordered pair, or None when ``p`` does not precede ``q``."""
        p, q = self._require(p, q)
        if _same(p, q):
            return None
        d, fwd = _forward_hit(self.future, p, q)
        if not _strictly_before(d, fwd):
            return None
        _, back = _forward_hit(self.past, q, p)
        if not _strictly_before(d, back):
            return None
        if not self._arc_ok(d, fwd.t, back.t):
            return None
        return Chord(p, q, d, fwd, back)

    def precedes(self, p, q) -> bool:
        return self.chord(p, q) is not None


class SphericalHilbertContext(HilbertContext):
    kind = "spherical_hilbert"
    allowed_charts = ("spherical",)

    def _arc_ok(self, d, t_future, t_past) -> bool:
        # the chord a1 -> a2 must be shorter than a half great circle
        return (t_past - d) + t_future < math.pi - ARC_MARGIN


class ProjectiveDeSitterContext(SphericalHilbertContext):
    """Antipodal pair ``(K, -K)``; ``K`` is the past body."""

    kind = "projective_desitter"

    def __init__(self, body: ConvexBody, check_disjoint: bool = True):
        if body.chart.kind != "spherical":
            raise UnsupportedChartError("projective de Sitter contexts live on the sphere")
        super().__init__(body, body.antipodal(), check_disjoint=check_disjoint)
        self.body = body

    def tangency_residual(self, p, q) -> float:
        """How far the great circle through ``p`` and ``q`` is from touching ``K``.

        Zero for a tangent circle, negative when it cuts the body, positive when
        it misses it.  Caps use ``|proj c| - cos r`` on the circle's plane;
        polytopes use the width of the clipped parameter interval.
        """
        p = self.chart.point(p)
        q = self.chart.point(q)
        basis = _plane_basis(p, q)
        body = self.body
        if isinstance(body, Ball):
            proj = float(np.linalg.norm(basis @ body.center))
            return math.cos(body.radius) - proj
        widths = []
        u = basis[1]
        for base, direction in ((basis[0], u), (-basis[0], -u)):
            t_in, t_out, i_in, i_out = body._clip(GeodesicRay(self.chart, base, direction))
            if i_in is not None or i_out is not None:
                widths.append(t_in - t_out)
        return min(widths) if widths else math.inf


def _plane_basis(p, q) -> np.ndarray:
    """Orthonormal basis (p, u) of the plane spanned by ``p`` and ``q``."""
    u = (q - p) - np.dot(p, q - p) * p
    norm = np.linalg.norm(u)
    if norm < 1e-12:
        raise PreconditionError("p and q do not span a great circle")
    return np.vstack([p, u / norm])


HilbertLike = (HilbertContext, SphericalHilbertContext, ProjectiveDeSitterContext)


def funk_precedes(ctx: FunkContext, p, q) -> bool:
    if not isinstance(ctx, FunkContext):
        raise UnsupportedRepresentationError("funk_precedes needs a Funk context")
    return ctx.precedes(p, q)


def inclusion_precedes(ctx: FunkContext, p, q) -> bool:
    """Order via separating faces: the faces separating ``q`` all separate ``p``."""
    if not isinstance(ctx, FunkContext) or not isinstance(ctx.body, HPolytope):
        raise UnsupportedRepresentationError("the inclusion test needs a polytope Funk context")
    p, q = ctx._require(p, q)
    if _same(p, q):
        return False
    body = ctx.body
    from_p = body.separating_faces(p)
    for face in body.separating_faces(q):
        if not any(face is other for other in from_p):
            return False
    _, hit = _forward_hit(body, p, q)
    return hit is not None and hit.transversal


def hilbert_precedes(ctx: HilbertContext, p, q) -> bool:
    if not isinstance(ctx, HilbertContext):
        raise UnsupportedRepresentationError("hilbert_precedes needs a Hilbert context")
    return ctx.precedes(p, q)


def classify_pair(ctx, p, q) -> PairClass:
    p = ctx.chart.point(p)
    q = ctx.chart.point(q)
    if isinstance(ctx, ProjectiveDeSitterContext):
        if _same(p, q) or _same(p, -q):
            return PairClass.COINCIDENT
        ctx._require(p, q)
        if ctx.precedes(p, q) or ctx.precedes(p, -q):
            return PairClass.TIMELIKE
        if abs(ctx.tangency_residual(p, q)) <= TRANSVERSAL_TOL:
            return PairClass.NULL
        return PairClass.UNRELATED
    if _same(p, q):
        return PairClass.COINCIDENT
    return PairClass.TIMELIKE if ctx.precedes(p, q) else PairClass.UNRELATED


def cone_segment_disagreements(ctx: FunkContext, pairs) -> int:
    """Count pairs where the literal cone reading and the segment reading differ."""
    return sum(ctx.cone_precedes(p, q) != ctx.precedes(p, q) for p, q in pairs)
