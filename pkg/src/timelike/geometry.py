"""Charts, geodesic rays, hyperplanes and cross ratios.

Three ambient geometries are supported:

* ``euclidean``  points of R^n.
* ``spherical``  unit vectors of R^(n+1).
* ``hyperbolic`` the upper sheet of the hyperboloid <x, x> = -1 in Minkowski
  space R^(n,1), form signature (-, +, ..., +).

Every metric formula in the package reduces to a distance *kernel* applied to
a geodesic distance: the identity, ``sin`` or ``sinh``.  For a totally geodesic
hyperplane the kernel of the point-to-hyperplane distance is a plain linear
pairing, which is what :class:`Hyperplane.signed` returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AmbiguousGeodesicError,
    ChartMismatchError,
    CoCircularityError,
    CollinearityError,
    CoordinateDomainError,
    DegenerateConfigurationError,
    DegenerateRayError,
)

KINDS = ("euclidean", "spherical", "hyperbolic")

POINT_TOL = 1e-9
UNIT_TOL = 1e-12
COLLINEAR_TOL = 1e-9


def minkowski(x, y):
    """Minkowski pairing with signature (-, +, ..., +)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(-x[0] * y[0] + np.dot(x[1:], y[1:]))


def _frozen(x):
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Chart:
    kind: str
    dimension: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if int(self.dimension) < 1:
            raise ValueError("chart dimension must be >= 1")

    @property
    def ambient_dim(self) -> int:
        return self.dimension if self.kind == "euclidean" else self.dimension + 1

    @property
    def cutoff(self) -> float:
        """Largest ray parameter considered (rays wrap past -p on the sphere)."""
        return math.pi if self.kind == "spherical" else math.inf

    def form(self, x, y) -> float:
        if self.kind == "hyperbolic":
            return minkowski(x, y)
        return float(np.dot(x, y))

    def point(self, x) -> np.ndarray:
        """Validate ``x`` as a point of this chart and return it renormalized."""
        arr = np.asarray(x, dtype=float).reshape(-1)
        if arr.shape != (self.ambient_dim,):
            raise CoordinateDomainError(
                f"{self.kind} chart of dimension {self.dimension} expects "
                f"{self.ambient_dim} coordinates, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise CoordinateDomainError("non-finite coordinate")
        if self.kind == "spherical":
            sq = float(np.dot(arr, arr))
            if abs(sq - 1.0) > POINT_TOL:
                raise CoordinateDomainError(f"point is not on the unit sphere (|x|^2 = {sq!r})")
            return arr / math.sqrt(sq)
        if self.kind == "hyperbolic":
            sq = minkowski(arr, arr)
            # rounding in <x,x> scales with the Euclidean size of x
            if abs(sq + 1.0) > POINT_TOL * max(1.0, float(np.dot(arr, arr))) or arr[0] <= 0:
                raise CoordinateDomainError(f"point is not on the upper hyperboloid (<x,x> = {sq!r})")
            return arr / math.sqrt(-sq)
        return arr.copy()

    def project_tangent(self, p, v) -> np.ndarray:
        """Orthogonal projection of an ambient vector onto the tangent space at ``p``."""
        v = np.asarray(v, dtype=float)
        if self.kind == "spherical":
            return v - np.dot(p, v) * p
        if self.kind == "hyperbolic":
            return v + minkowski(p, v) * p
        return v.copy()

    def tangent_norm(self, p, v) -> float:
        if self.kind == "hyperbolic":
            return math.sqrt(max(minkowski(v, v), 0.0))
        return float(np.linalg.norm(v))

    def kernel(self, t):
        if self.kind == "spherical":
            return np.sin(t)
        if self.kind == "hyperbolic":
            return np.sinh(t)
        return t

    def inverse_kernel(self, s):
        if self.kind == "spherical":
            return np.arcsin(np.clip(s, -1.0, 1.0))
        if self.kind == "hyperbolic":
            return np.arcsinh(s)
        return s

    def kernel_log_derivative(self, t):
        """``k'(t) / k(t)``: the rate at which ``log k`` shrinks when approaching a hit."""
        if self.kind == "spherical":
            return 1.0 / math.tan(t)
        if self.kind == "hyperbolic":
            return 1.0 / math.tanh(t)
        return 1.0 / t

    def kernel_log_ratio(self, t, d):
        """Stable ``log(k(t) / k(t - d))`` for 0 <= d < t."""
        if d == 0.0:
            return 0.0
        if self.kind == "euclidean":
            return -math.log1p(-d / t)
        if self.kind == "hyperbolic":
            # sinh(t-d)/sinh(t) - 1 = 2 sinh^2(d/2) - coth(t) sinh(d)
            delta = 2.0 * math.sinh(0.5 * d) ** 2 - math.sinh(d) / math.tanh(t)
        else:
            delta = -2.0 * math.sin(0.5 * d) ** 2 - math.sin(d) / math.tan(t)
        return -math.log1p(delta)

    def distance(self, x, y) -> float:
        return chart_distance(self, x, y)


def _check_chart(chart, *others):
    for other in others:
        if other.chart != chart:
            raise ChartMismatchError(f"chart mismatch: {chart} vs {other.chart}")


def chart_distance(chart: Chart, x, y) -> float:
    """Geodesic distance between two points of ``chart``."""
    x = chart.point(x)
    y = chart.point(y)
    diff = x - y
    if chart.kind == "euclidean":
        return float(np.linalg.norm(diff))
    if chart.kind == "spherical":
        return 2.0 * math.atan2(float(np.linalg.norm(diff)), float(np.linalg.norm(x + y)))
    # <x-y, x-y> = 4 sinh^2(d/2); accurate for nearby points, unlike arccosh.
    sq = max(minkowski(diff, diff), 0.0)
    return 2.0 * math.asinh(0.5 * math.sqrt(sq))


@dataclass(frozen=True)
class GeodesicRay:
    """Arc-length parametrized geodesic ray ``x(t)`` from ``base`` along ``direction``."""

    chart: Chart
    base: np.ndarray
    direction: np.ndarray

    @classmethod
    def from_direction(cls, chart: Chart, p, v) -> "GeodesicRay":
        p = chart.point(p)
        u = chart.project_tangent(p, v)
        norm = chart.tangent_norm(p, u)
        if not norm > 0.0:
            raise DegenerateRayError("zero or non-spacelike initial direction")
        return cls(chart, _frozen(p), _frozen(u / norm))

    def point(self, t: float) -> np.ndarray:
        p, u = self.base, self.direction
        # renormalize so rounding does not accumulate along chains of rays
        if self.chart.kind == "spherical":
            x = p * math.cos(t) + u * math.sin(t)
            return x / math.sqrt(float(np.dot(x, x)))
        if self.chart.kind == "hyperbolic":
            x = p * math.cosh(t) + u * math.sinh(t)
            return x / math.sqrt(-minkowski(x, x))
        return p + t * u

    def tangent(self, t: float) -> np.ndarray:
        p, u = self.base, self.direction
        if self.chart.kind == "spherical":
            return -p * math.sin(t) + u * math.cos(t)
        if self.chart.kind == "hyperbolic":
            return p * math.sinh(t) + u * math.cosh(t)
        return u.copy()


def geodesic_through(chart: Chart, p, q) -> GeodesicRay:
    p = chart.point(p)
    q = chart.point(q)
    diff = q - p
    if not np.any(diff):
        raise DegenerateRayError("coincident points do not determine a ray")
    if chart.kind == "spherical" and np.linalg.norm(p + q) < COLLINEAR_TOL:
        raise AmbiguousGeodesicError("antipodal points lie on infinitely many great circles")
    # projecting q - p (not q) keeps full relative accuracy for nearby points
    return GeodesicRay.from_direction(chart, p, diff)


@dataclass(frozen=True)
class Hyperplane:
    """Totally geodesic hypersurface ``{signed(x) = 0}``.

    ``signed(x)`` is ``<n, x> - c`` (euclidean), ``<u, x>`` (spherical) or
    ``<w, x>_M`` (hyperbolic) with a unit normal, so ``|signed(x)|`` equals the
    kernel of the distance from ``x`` to the hyperplane: d, sin d or sinh d.
    The positive side ``signed > 0`` is the one the normal points into.
    """

    chart: Chart
    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(-1)
        if n.shape != (self.chart.ambient_dim,):
            raise CoordinateDomainError("hyperplane normal has the wrong length")
        if self.chart.kind == "hyperbolic":
            sq = minkowski(n, n)
        else:
            sq = float(np.dot(n, n))
        if not sq > 0.0:
            raise CoordinateDomainError("hyperplane normal must be nonzero (spacelike in Minkowski space)")
        scale = math.sqrt(sq)
        offset = float(self.offset)
        if self.chart.kind != "euclidean" and offset != 0.0:
            raise CoordinateDomainError("only euclidean hyperplanes carry an offset")
        object.__setattr__(self, "normal", _frozen(n / scale))
        object.__setattr__(self, "offset", offset / scale)

    def signed(self, x) -> float:
        return self.chart.form(self.normal, x) - self.offset

    def rate(self, v) -> float:
        """Derivative of :meth:`signed` along the tangent vector ``v``."""
        return self.chart.form(self.normal, v)

    def kernel_distance(self, x) -> float:
        return abs(self.signed(x))

    def distance(self, x) -> float:
        return float(self.chart.inverse_kernel(self.kernel_distance(x)))

    def in_positive(self, x, margin: float = 0.0) -> bool:
        return self.signed(x) > margin

    def in_negative(self, x, margin: float = 0.0) -> bool:
        return self.signed(x) < -margin

    def flipped(self) -> "Hyperplane":
        return Hyperplane(self.chart, -self.normal, -self.offset)

    def same_as(self, other: "Hyperplane", tol: float = UNIT_TOL) -> bool:
        return (
            self.chart == other.chart
            and float(np.max(np.abs(self.normal - other.normal))) <= tol
            and abs(self.offset - other.offset) <= tol
        )


def hyperplane_distance(chart: Chart, x, plane: Hyperplane) -> float:
    if plane.chart != chart:
        raise ChartMismatchError(f"hyperplane lives in {plane.chart}, point in {chart}")
    return plane.distance(chart.point(x))


def hyperplane_kernel_distance(chart: Chart, x, plane: Hyperplane) -> float:
    """``d``, ``sin d`` or ``sinh d`` without an inverse-trig round trip."""
    if plane.chart != chart:
        raise ChartMismatchError(f"hyperplane lives in {plane.chart}, point in {chart}")
    return plane.kernel_distance(chart.point(x))


def _as_line_points(points):
    arrs = [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
    if len({a.shape for a in arrs}) != 1:
        raise CollinearityError("points have different dimensions")
    return arrs


def affine_cross_ratio(a1, p, q, a2) -> float:
    """``(d(p,a2) d(q,a1)) / (d(q,a2) d(p,a1))`` for collinear points.

    Scalars are treated as points on the real line.
    """
    a1, p, q, a2 = _as_line_points((a1, p, q, a2))
    span = a2 - a1
    length = float(np.linalg.norm(span))
    if length == 0.0:
        raise DegenerateConfigurationError("a1 and a2 coincide")
    axis = span / length
    for x in (p, q):
        rel = x - a1
        residual = rel - np.dot(rel, axis) * axis
        if float(np.linalg.norm(residual)) > COLLINEAR_TOL:
            raise CollinearityError("points are not collinear")
    d = lambda x, y: float(np.linalg.norm(x - y))
    den = d(q, a2) * d(p, a1)
    if den == 0.0:
        raise DegenerateConfigurationError("zero denominator in cross ratio")
    return d(p, a2) * d(q, a1) / den


def spherical_cross_ratio(p1, p2, p3, p4) -> float:
    """Sine cross ratio ``sin d(p2,p4) sin d(p3,p1) / (sin d(p3,p4) sin d(p2,p1))``."""
    pts = [np.asarray(p, dtype=float).reshape(-1) for p in (p1, p2, p3, p4)]
    chart = Chart("spherical", pts[0].size - 1)
    pts = [chart.point(p) for p in pts]
    sv = np.linalg.svd(np.vstack(pts), compute_uv=False)
    if sv.size > 2 and sv[2] > COLLINEAR_TOL:
        raise CoCircularityError("points do not lie on a common great circle")
    s = lambda x, y: math.sin(chart_distance(chart, x, y))
    den = s(pts[2], pts[3]) * s(pts[1], pts[0])
    if den == 0.0:
        raise DegenerateConfigurationError("zero denominator in spherical cross ratio")
    return s(pts[1], pts[3]) * s(pts[2], pts[0]) / den


def kernel_cross_ratio(chart: Chart, a1, p, q, a2) -> float:
    """Cross ratio of four points on one geodesic with the chart's distance kernel."""
    if chart.kind == "euclidean":
        return affine_cross_ratio(a1, p, q, a2)
    if chart.kind == "spherical":
        return spherical_cross_ratio(a1, p, q, a2)
    pts = [chart.point(x) for x in (a1, p, q, a2)]
    sv = np.linalg.svd(np.vstack(pts), compute_uv=False)
    if sv[2] > COLLINEAR_TOL * max(1.0, sv[0]):
        raise CollinearityError("points do not lie on a common hyperbolic geodesic")
    k = lambda x, y: math.sinh(chart_distance(chart, x, y))
    den = k(pts[2], pts[3]) * k(pts[1], pts[0])
    if den == 0.0:
        raise DegenerateConfigurationError("zero denominator in cross ratio")
    return k(pts[1], pts[3]) * k(pts[2], pts[0]) / den


def klein_to_hyperboloid(y) -> np.ndarray:
    """Lift Klein-ball coordinates (|y| < 1) to the hyperboloid sheet."""
    y = np.asarray(y, dtype=float).reshape(-1)
    sq = float(np.dot(y, y))
    if not sq < 1.0:
        raise CoordinateDomainError("Klein coordinates must lie in the open unit ball")
    return np.concatenate(([1.0], y)) / math.sqrt(1.0 - sq)


def hyperboloid_to_klein(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    return x[1:] / x[0]
