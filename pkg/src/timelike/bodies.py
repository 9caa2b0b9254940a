"""Convex bodies: half-space polytopes and balls (Euclidean balls, spherical caps,
hyperbolic balls).

Every body answers three queries used by the metrics: point classification,
the first boundary hit of a geodesic ray, and the family of supporting
hyperplanes separating an outside point from the body.

Ray clipping relies on one fact shared by the three charts: along a geodesic
ray the pairing ``s(t)`` of a point with a hyperplane is ``a + b t``,
``a cos t + b sin t`` or ``a cosh t + b sinh t``.  Each has at most one zero
on the ray's domain, so every face contributes a single lower or upper bound
on ``t``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize

from .errors import (
    ChartMismatchError,
    CoordinateDomainError,
    EmptyFamilyError,
    NoSeparatorError,
    PreconditionError,
    UnsupportedChartError,
    ValidationError,
)
from .geometry import (
    Chart,
    GeodesicRay,
    Hyperplane,
    chart_distance,
    hyperboloid_to_klein,
    klein_to_hyperboloid,
    minkowski,
)

BOUNDARY_BAND = 1e-9
TRANSVERSAL_TOL = 1e-9
CLIP_TOL = 1e-12
SEPARATION_MARGIN = 1e-12
# A ball hit is tangent when its discriminant is within rounding of zero; the
# pairing is a square root of it, so a 1e-16 discriminant would read as 1e-8.
TANGENCY_FLOOR = 1e-14

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


@dataclass(frozen=True)
class RayHit:
    t: float
    point: np.ndarray
    transversal: bool
    pairing: float
    plane: Hyperplane | None = None


def random_tangent(chart: Chart, x, rng) -> np.ndarray:
    """Uniformly distributed unit tangent vector at ``x``."""
    while True:
        v = chart.project_tangent(x, rng.standard_normal(chart.ambient_dim))
        norm = chart.tangent_norm(x, v)
        if norm > 1e-6:
            return v / norm


class ConvexBody:
    """Common interface; see :class:`HPolytope` and :class:`Ball`."""

    chart: Chart
    kind: str
    interior_point: np.ndarray

    # subclasses implement: signed_depth, _clip, tangent/face planes, ...

    def _own(self, x) -> np.ndarray:
        return self.chart.point(x)

    def contains(self, x) -> str:
        s = self.signed_depth(self._own(x))
        if s < -BOUNDARY_BAND:
            return INTERIOR
        if s > BOUNDARY_BAND:
            return EXTERIOR
        return BOUNDARY

    def is_exterior(self, x) -> bool:
        return self.contains(x) == EXTERIOR

    def ray_first_hit(self, ray: GeodesicRay) -> RayHit | None:
        if ray.chart != self.chart:
            raise ChartMismatchError("ray and body live in different charts")
        if self.contains(ray.base) != EXTERIOR:
            raise PreconditionError("ray base point must be exterior to the body")
        return self._first_hit(ray)

    def exit_parameter(self, ray: GeodesicRay) -> float:
        """Ray parameter at which a ray starting inside the body leaves it."""
        if self.contains(ray.base) == EXTERIOR:
            raise PreconditionError("ray base point must lie in the body")
        return self._exit(ray)

    def separating_hyperplanes(self, x) -> "SeparatingFamily":
        x = self._own(x)
        if self.contains(x) != EXTERIOR:
            raise EmptyFamilyError("only exterior points are separated from the body")
        return SeparatingFamily(self, x)

    def sample_interior(self, rng, count: int, reach: float | None = None) -> list[np.ndarray]:
        out = []
        w = self.interior_point
        while len(out) < count:
            ray = GeodesicRay.from_direction(self.chart, w, random_tangent(self.chart, w, rng))
            t_out = self._exit(ray)
            limit = _finite_reach(self.chart, t_out, reach)
            out.append(ray.point(rng.uniform(0.02, 0.95) * limit))
        return out

    def sample_boundary(self, rng, count: int, reach: float | None = None, max_tries: int = 1000) -> list[np.ndarray]:
        out = []
        w = self.interior_point
        tries = 0
        while len(out) < count and tries < max_tries * max(count, 1):
            tries += 1
            ray = GeodesicRay.from_direction(self.chart, w, random_tangent(self.chart, w, rng))
            t_out = self._exit(ray)
            if reach is not None and t_out > reach:
                continue
            if not math.isfinite(t_out) or t_out >= self.chart.cutoff:
                continue
            out.append(ray.point(t_out))
        return out

    def sample_exterior(self, rng, count: int, radius: float) -> list[np.ndarray]:
        """Exterior points within ``radius`` of the interior witness."""
        out = []
        w = self.interior_point
        while len(out) < count:
            ray = GeodesicRay.from_direction(self.chart, w, random_tangent(self.chart, w, rng))
            x = ray.point(rng.uniform(0.0, radius))
            if self.contains(x) == EXTERIOR:
                out.append(x)
        return out


def _central_point(normals, offsets, bounds, message) -> np.ndarray:
    """Point of ``{normals @ x < offsets}`` with a healthy margin and small norm.

    First maximize the margin (capped at 1), then, keeping half of it,
    minimize the L1 norm so unbounded bodies get a witness near the origin.
    """
    m, n = normals.shape
    a_ub = np.hstack([normals, np.ones((m, 1))])
    res = linprog(np.r_[np.zeros(n), -1.0], A_ub=a_ub, b_ub=offsets, bounds=list(bounds) + [(None, 1.0)],
                  method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        raise ValidationError(message)
    margin = 0.5 * res.x[-1]
    # variables x, s with -s <= x <= s
    eye = np.eye(n)
    a_ub = np.vstack([
        np.hstack([normals, np.zeros((m, n))]),
        np.hstack([eye, -eye]),
        np.hstack([-eye, -eye]),
    ])
    b_ub = np.r_[offsets - margin, np.zeros(2 * n)]
    res2 = linprog(np.r_[np.zeros(n), np.ones(n)], A_ub=a_ub, b_ub=b_ub,
                   bounds=list(bounds) + [(0, None)] * n, method="highs")
    return res2.x[:n] if res2.status == 0 else res.x[:n]


def _finite_reach(chart: Chart, t_out: float, reach: float | None) -> float:
    limit = t_out
    if reach is not None:
        limit = min(limit, reach)
    if not math.isfinite(limit) or limit >= chart.cutoff:
        limit = min(chart.cutoff * 0.45, 5.0) if reach is None else reach
    return limit


def _face_bound(chart: Chart, a: float, b: float):
    """Bound on ``t`` where ``s(t) < 0`` for one face along one ray.

    ``a`` is the pairing at the base point and ``b`` its rate along the unit
    direction.  Returns ``("all" | "none" | "lower" | "upper", t)``.
    """
    if chart.kind == "spherical":
        if a == 0.0:
            return ("all", 0.0) if b < 0.0 else ("none", 0.0)
        t = math.atan2(a, -b)
        if t <= 0.0:
            t += math.pi
        return ("lower", t) if a > 0.0 else ("upper", t)
    if b == 0.0:
        return ("all", 0.0) if a < 0.0 else ("none", 0.0)
    root = -a / b
    if chart.kind == "hyperbolic":
        if b < 0.0:
            if root >= 1.0:
                return ("none", 0.0)
            return ("lower", math.atanh(root)) if root > 0.0 else ("all", 0.0)
        if root <= 0.0:
            return ("none", 0.0)
        return ("upper", math.atanh(root)) if root < 1.0 else ("all", 0.0)
    if b < 0.0:
        return ("lower", root) if root > 0.0 else ("all", 0.0)
    return ("upper", root) if root > 0.0 else ("none", 0.0)


class HPolytope(ConvexBody):
    """Intersection of open half-spaces ``{signed(x) < 0}``, one per face.

    Unbounded bodies (a single half-space, a strip wall) are allowed.
    """

    kind = "hpolytope"

    def __init__(self, chart: Chart, faces, interior_point=None, hemisphere=None):
        self.chart = chart
        planes: list[Hyperplane] = []
        for face in faces:
            if not isinstance(face, Hyperplane):
                normal, offset = face
                face = Hyperplane(chart, normal, offset)
            if face.chart != chart:
                raise ChartMismatchError("face chart differs from body chart")
            if not any(face.same_as(other) for other in planes):
                planes.append(face)
        if not planes:
            raise ValidationError("a polytope needs at least one face")
        self.faces = tuple(planes)
        self._normals = np.array([f.normal for f in self.faces])
        self._offsets = np.array([f.offset for f in self.faces])
        if chart.kind == "spherical":
            self.hemisphere = self._hemisphere_witness(hemisphere)
        else:
            self.hemisphere = None
        if interior_point is None:
            interior_point = self._find_interior()
        else:
            interior_point = chart.point(interior_point)
        if self.signed_depth(interior_point) >= -BOUNDARY_BAND:
            raise ValidationError("polytope interior is empty or the witness point is not interior")
        self.interior_point = interior_point

    def __repr__(self):
        return f"HPolytope({self.chart.kind}, {len(self.faces)} faces)"

    def _pairings(self, x) -> np.ndarray:
        if self.chart.kind == "hyperbolic":
            y = np.asarray(x, dtype=float).copy()
            y[0] = -y[0]
            return self._normals @ y - self._offsets
        return self._normals @ np.asarray(x, dtype=float) - self._offsets

    def signed_depth(self, x) -> float:
        return float(np.max(self._pairings(x)))

    def _hemisphere_witness(self, given):
        if np.linalg.matrix_rank(self._normals, tol=1e-9) < self.chart.ambient_dim:
            raise ValidationError("spherical polytope is not contained in an open hemisphere")
        h = -self._normals.sum(axis=0) if given is None else np.asarray(given, dtype=float)
        h = h / np.linalg.norm(h)
        # h must be a strictly positive combination of the negated normals
        res = linprog(
            np.zeros(len(self.faces)),
            A_eq=-self._normals.T,
            b_eq=h,
            bounds=[(1e-9, None)] * len(self.faces),
            method="highs",
        )
        if res.status != 0:
            raise ValidationError("hemisphere witness does not certify the body")
        return h

    def _find_interior(self) -> np.ndarray:
        chart = self.chart
        m = len(self.faces)
        if chart.kind == "euclidean":
            n = chart.dimension
            box = 1e6 + 2.0 * float(np.max(np.abs(self._offsets)))
            return _central_point(self._normals, self._offsets, [(-box, box)] * n, "polytope has empty interior")
        if chart.kind == "spherical":
            n1 = chart.ambient_dim
            a_ub = np.hstack([self._normals, np.ones((m, 1))])
            a_eq = np.r_[self.hemisphere, 0.0][None, :]
            bounds = [(-1e3, 1e3)] * n1 + [(None, 1.0)]
            res = linprog(np.r_[np.zeros(n1), -1.0], A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                          bounds=bounds, method="highs")
            if res.status != 0 or res.x[-1] <= 1e-9:
                raise ValidationError("spherical polytope has empty interior")
            x = res.x[:n1]
            return x / np.linalg.norm(x)
        # hyperbolic: linear constraints in Klein coordinates, inside a cube inscribed in the ball
        n = chart.dimension
        message = "hyperbolic polytope has empty interior (or none found in the search region)"
        side = (1.0 - 1e-6) / math.sqrt(n)
        try:
            y = _central_point(self._normals[:, 1:], self._normals[:, 0], [(-side, side)] * n, message)
        except ValidationError:
            # the cross-polytope inscribed in the Klein ball reaches further along the axes
            signs = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
            normals = np.vstack([self._normals[:, 1:], signs])
            offsets = np.r_[self._normals[:, 0], np.full(len(signs), 1.0 - 1e-6)]
            y = _central_point(normals, offsets, [(-1.0, 1.0)] * n, message)
        return klein_to_hyperboloid(y)

    def _clip(self, ray: GeodesicRay):
        """Feasible parameter interval ``(t_in, t_out)`` and the face indices bounding it."""
        p, u = ray.base, ray.direction
        a_all = self._pairings(p)
        b_all = self._pairings(u) + self._offsets
        t_in, t_out = 0.0, self.chart.cutoff
        i_in = i_out = None
        for i, (a, b) in enumerate(zip(a_all, b_all)):
            kind, t = _face_bound(self.chart, float(a), float(b))
            if kind == "none":
                return 0.0, 0.0, None, None
            if kind == "lower" and t > t_in:
                t_in, i_in = t, i
            elif kind == "upper" and t < t_out:
                t_out, i_out = t, i
        return t_in, t_out, i_in, i_out

    def _first_hit(self, ray: GeodesicRay) -> RayHit | None:
        t_in, t_out, i_in, _ = self._clip(ray)
        if i_in is None or not t_in < t_out - CLIP_TOL:
            return None
        face = self.faces[i_in]
        pairing = abs(face.rate(ray.tangent(t_in)))
        return RayHit(t_in, ray.point(t_in), pairing > TRANSVERSAL_TOL, pairing, face)

    def _exit(self, ray: GeodesicRay) -> float:
        return self._clip(ray)[1]

    def supporting_planes(self):
        return self.faces

    def separating_faces(self, x) -> tuple[Hyperplane, ...]:
        pair = self._pairings(self._own(x))
        return tuple(f for f, s in zip(self.faces, pair) if s > SEPARATION_MARGIN)

    def antipodal(self) -> "HPolytope":
        _require_spherical(self.chart)
        return HPolytope(self.chart, [Hyperplane(self.chart, -f.normal) for f in self.faces],
                         interior_point=-self.interior_point)

    def transformed(self, matrix, shift=None) -> "HPolytope":
        """Image under an isometry: orthogonal/Lorentz ``matrix`` (plus ``shift`` for euclidean)."""
        m = np.asarray(matrix, dtype=float)
        faces = []
        for f in self.faces:
            n = m @ f.normal
            off = f.offset + (float(np.dot(n, shift)) if shift is not None else 0.0)
            faces.append(Hyperplane(self.chart, n, off))
        w = m @ self.interior_point + (shift if shift is not None else 0.0)
        return HPolytope(self.chart, faces, interior_point=w)

    def linear_constraints(self):
        """Constraints ``g(z) >= 0`` in the body's linear coordinates (see :func:`body_separation`)."""
        if self.chart.kind == "hyperbolic":
            return [lambda z, f=f: f.normal[0] - float(np.dot(f.normal[1:], z)) for f in self.faces]
        return [lambda z, f=f: f.offset - float(np.dot(f.normal, z)) for f in self.faces]


class Ball(ConvexBody):
    """Closed geodesic ball: Euclidean disc, spherical cap (radius < pi/2), hyperbolic ball."""

    def __init__(self, chart: Chart, center, radius: float):
        self.chart = chart
        self.center = chart.point(center)
        self.center.setflags(write=False)
        self.radius = float(radius)
        if not self.radius > 0.0:
            raise ValidationError("ball radius must be positive")
        if chart.kind == "spherical" and not self.radius < math.pi / 2:
            raise ValidationError("spherical caps must have radius < pi/2 to sit in an open hemisphere")
        self.kind = "cap" if chart.kind == "spherical" else "ball"
        self.hemisphere = self.center if chart.kind == "spherical" else None
        self.interior_point = self.center

    def __repr__(self):
        return f"Ball({self.chart.kind}, center={self.center.tolist()}, radius={self.radius})"

    def signed_depth(self, x) -> float:
        return chart_distance(self.chart, self.center, x) - self.radius

    def _coefficients(self, ray: GeodesicRay):
        c, p, u = self.center, ray.base, ray.direction
        if self.chart.kind == "hyperbolic":
            return -minkowski(c, p), -minkowski(c, u)
        return float(np.dot(c, p)), float(np.dot(c, u))

    def _first_hit(self, ray: GeodesicRay) -> RayHit | None:
        kind = self.chart.kind
        r = self.radius
        if kind == "euclidean":
            rel = ray.base - self.center
            b = float(np.dot(ray.direction, rel))
            c = float(np.dot(rel, rel)) - r * r
            disc = b * b - c
            if disc < 0.0 or b >= 0.0:
                return None
            root = math.sqrt(disc)
            t = c / (-b + root)
            pairing = root / r
            tangent = disc <= TANGENCY_FLOOR * max(b * b, abs(c), r * r)
        elif kind == "spherical":
            a, b = self._coefficients(ray)
            amp = math.hypot(a, b)
            cr = math.cos(r)
            if amp < cr:
                return None
            delta = math.acos(min(cr / amp, 1.0))
            t = math.atan2(b, a) - delta
            if t <= 0.0:
                t += 2.0 * math.pi
            if t >= math.pi:
                return None
            disc = (amp - cr) * (amp + cr)
            pairing = math.sqrt(max(disc, 0.0)) / math.sin(r)
            tangent = disc <= TANGENCY_FLOOR
        else:
            a, b = self._coefficients(ray)
            c0 = math.cosh(r)
            disc = c0 * c0 - (a - b) * (a + b)
            if disc < 0.0:
                return None
            root = math.sqrt(disc)
            e = (a - b) / (c0 + root)
            if e <= 1.0:
                return None
            t = math.log(e)
            pairing = root / math.sinh(r)
            tangent = disc <= TANGENCY_FLOOR * max(c0 * c0, a * a, b * b)
        point = ray.point(t)
        transversal = pairing > TRANSVERSAL_TOL and not tangent
        return RayHit(t, point, transversal, pairing, self.tangent_plane(point))

    def _exit(self, ray: GeodesicRay) -> float:
        kind = self.chart.kind
        r = self.radius
        if kind == "euclidean":
            rel = ray.base - self.center
            b = float(np.dot(ray.direction, rel))
            c = float(np.dot(rel, rel)) - r * r
            return -b + math.sqrt(max(b * b - c, 0.0))
        a, b = self._coefficients(ray)
        if kind == "spherical":
            amp = math.hypot(a, b)
            delta = math.acos(min(math.cos(r) / amp, 1.0))
            t = math.atan2(b, a) + delta
            return t if t > 0.0 else t + 2.0 * math.pi
        c0 = math.cosh(r)
        root = math.sqrt(max(c0 * c0 - (a - b) * (a + b), 0.0))
        return math.log((c0 + root) / (a + b))

    def tangent_plane(self, b) -> Hyperplane:
        """Supporting hyperplane at the boundary point ``b``, outward side positive."""
        c = self.center
        kind = self.chart.kind
        if kind == "euclidean":
            n = (b - c) / np.linalg.norm(b - c)
            return Hyperplane(self.chart, n, float(np.dot(n, b)))
        if kind == "spherical":
            return Hyperplane(self.chart, -(c - np.dot(c, b) * b))
        return Hyperplane(self.chart, -c - minkowski(c, b) * b)

    def boundary_point(self, direction) -> np.ndarray:
        """Boundary point reached from the center along the tangent ``direction``."""
        ray = GeodesicRay.from_direction(self.chart, self.center, direction)
        return ray.point(self.radius)

    def antipodal(self) -> "Ball":
        _require_spherical(self.chart)
        return Ball(self.chart, -self.center, self.radius)

    def transformed(self, matrix, shift=None) -> "Ball":
        c = np.asarray(matrix, dtype=float) @ self.center
        if shift is not None:
            c = c + shift
        return Ball(self.chart, c, self.radius)

    def linear_constraints(self):
        c, r = self.center, self.radius
        if self.chart.kind == "hyperbolic":
            ch = math.cosh(r)
            return [
                lambda z: ch * math.sqrt(max(1.0 - float(np.dot(z, z)), 0.0)) - (c[0] - float(np.dot(c[1:], z))),
            ]
        if self.chart.kind == "spherical":
            return [lambda z: float(np.dot(c, z)) - math.cos(r)]
        return [lambda z: r * r - float(np.dot(z - c, z - c))]


def _require_spherical(chart: Chart):
    if chart.kind != "spherical":
        raise UnsupportedChartError("the antipodal map is only defined on the sphere")


def antipodal_body(body: ConvexBody) -> ConvexBody:
    return body.antipodal()


class SeparatingFamily:
    """Supporting hyperplanes that separate the body from an exterior point.

    Finite (and iterable) for polytopes; for balls it is the family of tangent
    planes at boundary points visible from the point, described analytically.
    """

    def __init__(self, body: ConvexBody, point: np.ndarray):
        self.body = body
        self.point = point
        if isinstance(body, HPolytope):
            self.planes = body.separating_faces(point)
        else:
            self.planes = None

    @property
    def finite(self) -> bool:
        return self.planes is not None

    def __iter__(self):
        if self.planes is None:
            raise TypeError("the tangent-plane family of a ball is not enumerable; use sample()")
        return iter(self.planes)

    def __len__(self):
        if self.planes is None:
            raise TypeError("the tangent-plane family of a ball is infinite")
        return len(self.planes)

    def __contains__(self, plane: Hyperplane) -> bool:
        if self.planes is not None:
            return any(plane.same_as(f) for f in self.planes)
        return plane.signed(self.point) > SEPARATION_MARGIN and self._supports(plane)

    def _supports(self, plane: Hyperplane) -> bool:
        body = self.body
        # a tangent plane of a ball is at distance exactly r from the center
        s = plane.signed(body.center)
        return abs(abs(s) - float(body.chart.kernel(body.radius))) <= 1e-9 and s < 0.0

    def visible(self, b) -> bool:
        """Whether the tangent plane at boundary point ``b`` belongs to the family."""
        return self.body.tangent_plane(b).signed(self.point) > SEPARATION_MARGIN

    def sample(self, rng, count: int, max_tries: int = 200) -> list[Hyperplane]:
        if self.planes is not None:
            return list(self.planes)
        out = []
        c = self.body.center
        for _ in range(max_tries * count):
            b = self.body.boundary_point(random_tangent(self.body.chart, c, rng))
            if self.visible(b):
                out.append(self.body.tangent_plane(b))
                if len(out) == count:
                    break
        return out


def separating_hyperplanes(body: ConvexBody, x) -> SeparatingFamily:
    return body.separating_hyperplanes(x)


def ratio_infimum(body: ConvexBody, p, q):
    """Infimum of ``log(k d(p, pi) / k d(q, pi))`` over planes separating ``q``.

    Returns ``(value, plane)``.  When some separating plane of ``q`` does not
    separate ``p`` (``p`` is not in the past of ``q``) the infimum is ``-inf``.
    """
    chart = body.chart
    p = chart.point(p)
    q = chart.point(q)
    if body.contains(p) != EXTERIOR or body.contains(q) != EXTERIOR:
        raise PreconditionError("both points must be exterior to the body")
    if isinstance(body, HPolytope):
        planes = body.separating_faces(q)
        if not planes:
            raise NoSeparatorError("no face separates q from the body")
        best, arg = math.inf, None
        for plane in planes:
            sp, sq = plane.signed(p), plane.signed(q)
            value = -math.inf if sp <= 0.0 else math.log(sp / sq)
            if value < best:
                best, arg = value, plane
        return best, arg
    if not np.any(p - q):
        b = body.boundary_point(chart.project_tangent(body.center, q - body.center)
                                if chart.kind != "euclidean" else q - body.center)
        return 0.0, body.tangent_plane(b)
    ray = GeodesicRay.from_direction(chart, p, q - p)
    hit = body._first_hit(ray)
    d = chart_distance(chart, p, q)
    if hit is None or not hit.transversal or not d < hit.t - CLIP_TOL:
        return -math.inf, None
    plane = hit.plane
    return math.log(plane.signed(p) / plane.signed(q)), plane


def all_planes_infimum(body: HPolytope, p, q) -> float:
    """Diagnostic: the same ratio minimized over every face, using unsigned distances."""
    if not isinstance(body, HPolytope):
        raise PreconditionError("diagnostic only available for polytopes")
    p = body.chart.point(p)
    q = body.chart.point(q)
    best = math.inf
    for plane in body.faces:
        sq = abs(plane.signed(q))
        if sq > 0.0:
            best = min(best, math.log(abs(plane.signed(p)) / sq))
    return best


def _linear_coords(chart: Chart, x) -> np.ndarray:
    if chart.kind == "hyperbolic":
        return hyperboloid_to_klein(x)
    return np.asarray(x, dtype=float)


def _from_linear(chart: Chart, z) -> np.ndarray:
    if chart.kind == "hyperbolic":
        z = np.asarray(z, dtype=float)
        norm = float(np.linalg.norm(z))
        if norm >= 1.0:
            z = z * ((1.0 - 1e-12) / norm)
        return klein_to_hyperboloid(z)
    if chart.kind == "spherical":
        return np.asarray(z, dtype=float) / np.linalg.norm(z)
    return np.asarray(z, dtype=float)


def body_separation(first: ConvexBody, second: ConvexBody) -> float:
    """Chart distance between the closures of two bodies (0 if they meet).

    Exact for two balls; otherwise a local constrained minimization of the
    squared distance in linear coordinates (Euclidean, ambient for the
    sphere, Klein for hyperbolic space), started from the interior witnesses.
    """
    chart = first.chart
    if second.chart != chart:
        raise ChartMismatchError("bodies live in different charts")
    if isinstance(first, Ball) and isinstance(second, Ball):
        gap = chart_distance(chart, first.center, second.center) - first.radius - second.radius
        return max(gap, 0.0)
    z1 = _linear_coords(chart, first.interior_point)
    z2 = _linear_coords(chart, second.interior_point)
    n = z1.size
    cons = []
    for g in first.linear_constraints():
        cons.append({"type": "ineq", "fun": lambda z, g=g: g(z[:n])})
    for g in second.linear_constraints():
        cons.append({"type": "ineq", "fun": lambda z, g=g: g(z[n:])})
    if chart.kind == "spherical":
        cons.append({"type": "eq", "fun": lambda z: float(np.dot(z[:n], z[:n])) - 1.0})
        cons.append({"type": "eq", "fun": lambda z: float(np.dot(z[n:], z[n:])) - 1.0})
    if chart.kind == "hyperbolic":
        cons.append({"type": "ineq", "fun": lambda z: 1.0 - float(np.dot(z[:n], z[:n]))})
        cons.append({"type": "ineq", "fun": lambda z: 1.0 - float(np.dot(z[n:], z[n:]))})
    res = minimize(
        lambda z: float(np.dot(z[:n] - z[n:], z[:n] - z[n:])),
        np.r_[z1, z2],
        jac=lambda z: np.r_[2 * (z[:n] - z[n:]), -2 * (z[:n] - z[n:])],
        constraints=cons,
        method="SLSQP",
        options={"maxiter": 500, "ftol": 1e-14},
    )
    x = _from_linear(chart, res.x[:n])
    y = _from_linear(chart, res.x[n:])
    if first.contains(y) != EXTERIOR or second.contains(x) != EXTERIOR:
        return 0.0
    return chart_distance(chart, x, y)
