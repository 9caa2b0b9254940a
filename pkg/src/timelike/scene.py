"""JSON scene files: a chart, named bodies, a context binding, points and curves.

Example::

    {
      "chart": {"kind": "euclidean", "dimension": 2},
      "bodies": [{"id": "K", "kind": "ball", "center": [0, 0], "radius": 1}],
      "context": {"kind": "funk", "body": "K"},
      "points": {"p": [-2, 0]}
    }

Body kinds are ``ball``, ``cap`` (spherical ball) and ``hpolytope`` with
``faces: [{"normal": [...], "offset": c}]`` and the interior on the negative
side ``<normal, x> - offset < 0``.  Context kinds are ``funk`` (``body``),
``hilbert`` and ``spherical_hilbert`` (``past``, ``future``) and
``projective_desitter`` (``body``, the past body; its antipode is the future).

A hyperbolic chart may set ``"coordinates": "klein"``; points, centers and
curve vertices are then Klein-ball coordinates, and a face ``{"normal": u,
"offset": c}`` is the Klein half-space ``u . y < c``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import Ball, ConvexBody, HPolytope
from .errors import ParseError, TimelikeError, ValidationError
from .finsler import TimelikeCurve
from .geometry import Chart, klein_to_hyperboloid
from .order import FunkContext, HilbertContext, ProjectiveDeSitterContext, SphericalHilbertContext

CONTEXT_KINDS = ("funk", "hilbert", "spherical_hilbert", "projective_desitter")
BODY_KINDS = ("ball", "cap", "hpolytope")


@dataclass
class Scene:
    chart: Chart
    coordinates: str
    bodies: dict[str, ConvexBody]
    body_specs: list[dict]
    context_spec: dict
    context: object
    points: dict[str, np.ndarray] = field(default_factory=dict)
    point_specs: dict[str, list[float]] = field(default_factory=dict)
    curve_specs: dict[str, dict] = field(default_factory=dict)

    def point(self, spec) -> np.ndarray:
        """Resolve a named point or a coordinate list in the scene's coordinates."""
        if isinstance(spec, str) and spec in self.points:
            return self.points[spec]
        return _to_chart(self.chart, self.coordinates, spec, "point")

    def curve(self, name: str, density: int = 2048) -> TimelikeCurve:
        if name not in self.curve_specs:
            raise ValidationError(f"unknown curve {name!r}")
        return build_curve(self, self.curve_specs[name], density)


def _fail(where: str, message: str):
    raise ValidationError(f"{where}: {message}")


def _numbers(value, where: str, length: int | None = None) -> list[float]:
    if not isinstance(value, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        _fail(where, "expected a list of numbers")
    if length is not None and len(value) != length:
        _fail(where, f"expected {length} numbers, got {len(value)}")
    out = [float(v) for v in value]
    if not all(math.isfinite(v) for v in out):
        _fail(where, "numbers must be finite")
    return out


def _number(value, where: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        _fail(where, "expected a finite number")
    return float(value)


def _input_length(chart: Chart, coordinates: str) -> int:
    return chart.dimension if coordinates == "klein" else chart.ambient_dim


def _to_chart(chart: Chart, coordinates: str, value, where: str) -> np.ndarray:
    coords = _numbers(value, where, _input_length(chart, coordinates))
    try:
        if coordinates == "klein":
            return klein_to_hyperboloid(coords)
        return chart.point(coords)
    except TimelikeError as exc:
        _fail(where, str(exc))


def _parse_chart(doc) -> tuple[Chart, str]:
    spec = doc.get("chart")
    if not isinstance(spec, dict):
        _fail("chart", "missing chart descriptor")
    kind = spec.get("kind")
    dim = spec.get("dimension")
    if kind not in ("euclidean", "spherical", "hyperbolic"):
        _fail("chart.kind", f"unknown chart kind {kind!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        _fail("chart.dimension", "expected a positive integer")
    coordinates = spec.get("coordinates", "ambient")
    if coordinates not in ("ambient", "klein"):
        _fail("chart.coordinates", "expected 'ambient' or 'klein'")
    if coordinates == "klein" and kind != "hyperbolic":
        _fail("chart.coordinates", "klein coordinates need a hyperbolic chart")
    return Chart(kind, dim), coordinates


def _parse_body(chart: Chart, coordinates: str, spec, index: int) -> tuple[str, ConvexBody]:
    if not isinstance(spec, dict):
        _fail(f"bodies[{index}]", "expected an object")
    body_id = spec.get("id")
    if not isinstance(body_id, str) or not body_id:
        _fail(f"bodies[{index}].id", "expected a non-empty string")
    where = f"body {body_id!r}"
    kind = spec.get("kind")
    if kind not in BODY_KINDS:
        _fail(f"{where}.kind", f"unknown body kind {kind!r}")
    try:
        if kind in ("ball", "cap"):
            if (kind == "cap") != (chart.kind == "spherical"):
                _fail(f"{where}.kind", "caps are the balls of spherical charts")
            center = _to_chart(chart, coordinates, spec.get("center"), f"{where}.center")
            radius = _number(spec.get("radius"), f"{where}.radius")
            return body_id, Ball(chart, center, radius)
        faces_spec = spec.get("faces")
        if not isinstance(faces_spec, list) or not faces_spec:
            _fail(f"{where}.faces", "expected a non-empty list of faces")
        faces = []
        for j, face in enumerate(faces_spec):
            fw = f"{where}.faces[{j}]"
            if not isinstance(face, dict):
                _fail(fw, "expected an object with normal and offset")
            offset = _number(face.get("offset", 0.0), f"{fw}.offset")
            if coordinates == "klein":
                u = _numbers(face.get("normal"), f"{fw}.normal", chart.dimension)
                faces.append((np.array([offset] + u), 0.0))
            else:
                normal = _numbers(face.get("normal"), f"{fw}.normal", chart.ambient_dim)
                faces.append((np.array(normal), offset))
        interior = spec.get("interior_point")
        if interior is not None:
            interior = _to_chart(chart, coordinates, interior, f"{where}.interior_point")
        return body_id, HPolytope(chart, faces, interior_point=interior)
    except ValidationError as exc:
        if str(exc).startswith(where) or str(exc).startswith(f"bodies[{index}]"):
            raise
        raise ValidationError(f"{where}: {exc}") from exc
    except TimelikeError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _lookup(bodies, spec, key: str):
    body_id = spec.get(key)
    if body_id not in bodies:
        _fail(f"context.{key}", f"unknown body id {body_id!r}")
    return bodies[body_id]


def _parse_context(bodies, spec):
    if not isinstance(spec, dict):
        _fail("context", "missing context binding")
    kind = spec.get("kind")
    if kind not in CONTEXT_KINDS:
        _fail("context.kind", f"unknown context kind {kind!r}")
    try:
        if kind == "funk":
            return FunkContext(_lookup(bodies, spec, "body" if "body" in spec else "future"))
        if kind == "projective_desitter":
            return ProjectiveDeSitterContext(_lookup(bodies, spec, "body" if "body" in spec else "past"))
        past, future = _lookup(bodies, spec, "past"), _lookup(bodies, spec, "future")
        if kind == "hilbert":
            return HilbertContext(past, future)
        return SphericalHilbertContext(past, future)
    except ValidationError as exc:
        if str(exc).startswith("context"):
            raise
        raise ValidationError(f"context: {exc}") from exc
    except TimelikeError as exc:
        raise ValidationError(f"context: {exc}") from exc


def parse_scene(data: bytes | str) -> Scene:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"scene is not UTF-8: {exc}", 1, exc.start + 1) from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("scene must be a JSON object", 1, 1)
    chart, coordinates = _parse_chart(doc)
    body_specs = doc.get("bodies")
    if not isinstance(body_specs, list) or not body_specs:
        _fail("bodies", "expected a non-empty list")
    bodies: dict[str, ConvexBody] = {}
    for i, spec in enumerate(body_specs):
        body_id, body = _parse_body(chart, coordinates, spec, i)
        if body_id in bodies:
            _fail(f"body {body_id!r}", "duplicate id")
        bodies[body_id] = body
    context_spec = doc.get("context")
    context = _parse_context(bodies, context_spec)
    point_specs = doc.get("points", {})
    if not isinstance(point_specs, dict):
        _fail("points", "expected an object mapping names to coordinates")
    points = {name: _to_chart(chart, coordinates, value, f"point {name!r}") for name, value in point_specs.items()}
    curve_specs = doc.get("curves", {})
    if not isinstance(curve_specs, dict):
        _fail("curves", "expected an object mapping names to curve descriptions")
    scene = Scene(chart, coordinates, bodies, body_specs, context_spec, context, points,
                  {k: list(map(float, v)) for k, v in point_specs.items()}, curve_specs)
    for name, spec in curve_specs.items():
        build_curve(scene, spec, 2, where=f"curve {name!r}")
    return scene


def serialize_scene(scene: Scene) -> str:
    chart = {"kind": scene.chart.kind, "dimension": scene.chart.dimension}
    if scene.coordinates != "ambient":
        chart["coordinates"] = scene.coordinates
    doc = {"chart": chart, "bodies": scene.body_specs, "context": scene.context_spec}
    if scene.point_specs:
        doc["points"] = scene.point_specs
    if scene.curve_specs:
        doc["curves"] = scene.curve_specs
    return json.dumps(doc, indent=2) + "\n"


def build_curve(scene: Scene, spec, density: int, where: str = "curve") -> TimelikeCurve:
    """Curve kinds: ``segment`` (``from``, ``to``) and ``polyline`` (``points``,
    optional ``tangents``).  Vertices are named points or coordinate lists."""
    if not isinstance(spec, dict):
        _fail(where, "expected an object")
    kind = spec.get("kind")
    chart = scene.chart
    if kind == "segment":
        p = scene.point(spec.get("from"))
        q = scene.point(spec.get("to"))
        return TimelikeCurve.segment(chart, p, q, density)
    if kind != "polyline":
        _fail(f"{where}.kind", f"unknown curve kind {kind!r}")
    raw = spec.get("points")
    if not isinstance(raw, list) or len(raw) < 2:
        _fail(f"{where}.points", "expected at least two vertices")
    vertices = [scene.point(v) for v in raw]
    tangents = spec.get("tangents")
    pieces = len(vertices) - 1
    if tangents is not None:
        if not isinstance(tangents, list) or len(tangents) != len(vertices):
            _fail(f"{where}.tangents", "expected one tangent per vertex")
        tangents = [np.array(_numbers(t, f"{where}.tangents", chart.ambient_dim)) for t in tangents]

    def path_piece(t):
        s = min(max(t, 0.0), 1.0) * pieces
        i = min(int(s), pieces - 1)
        return i, s - i

    def path(t):
        i, u = path_piece(t)
        a, b = vertices[i], vertices[i + 1]
        if tangents is None:
            return a + u * (b - a)
        # cubic Hermite interpolation in ambient coordinates
        ta, tb = tangents[i] / pieces, tangents[i + 1] / pieces
        h00, h10 = 2 * u**3 - 3 * u**2 + 1, u**3 - 2 * u**2 + u
        h01, h11 = -2 * u**3 + 3 * u**2, u**3 - u**2
        return h00 * a + h10 * ta + h01 * b + h11 * tb

    def velocity(t):
        i, u = path_piece(t)
        a, b = vertices[i], vertices[i + 1]
        if tangents is None:
            return pieces * (b - a)
        ta, tb = tangents[i] / pieces, tangents[i + 1] / pieces
        d00, d10 = 6 * u**2 - 6 * u, 3 * u**2 - 4 * u + 1
        d01, d11 = -6 * u**2 + 6 * u, 3 * u**2 - 2 * u
        return pieces * (d00 * a + d10 * ta + d01 * b + d11 * tb)

    return TimelikeCurve.from_ambient(chart, path, velocity, density)
