"""Deterministic SVG pictures of two-dimensional scenes.

Euclidean scenes are drawn as they are, hyperbolic scenes in the Klein disc
and spherical scenes through the gnomonic projection of the upper hemisphere.
Numbers are printed with a fixed number of decimals so identical inputs give
identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import Ball, HPolytope
from .errors import RenderError
from .funk import dilate
from .geometry import GeodesicRay, hyperboloid_to_klein
from .order import FunkContext, HilbertContext, ProjectiveDeSitterContext
from .spherical import null_directions

SCALE = 100.0
ARC_SAMPLES = 720
CONE_SAMPLES = 3600
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


@dataclass
class Overlays:
    apex: np.ndarray | None = None
    cone: bool = False
    radii: tuple[float, ...] = ()
    null: bool = False
    view: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0)
    points: dict[str, np.ndarray] = field(default_factory=dict)


def _planar(chart, x):
    """Drawing-plane coordinates of a chart point, or None if not drawable."""
    x = np.asarray(x, dtype=float)
    if chart.kind == "euclidean":
        return x
    if chart.kind == "hyperbolic":
        return hyperboloid_to_klein(x)
    if x[0] <= 1e-9:
        return None
    return x[1:] / x[0]


def _fmt(v: float) -> str:
    text = f"{v:.3f}"
    return "0.000" if text == "-0.000" else text


class _Canvas:
    def __init__(self, view):
        self.xmin, self.xmax, self.ymin, self.ymax = view
        self.parts: list[str] = []

    def xy(self, p) -> str:
        x = (p[0] - self.xmin) * SCALE
        y = (self.ymax - p[1]) * SCALE
        return f"{_fmt(x)},{_fmt(y)}"

    def inside(self, p, pad: float = 1.0) -> bool:
        return (self.xmin - pad <= p[0] <= self.xmax + pad) and (self.ymin - pad <= p[1] <= self.ymax + pad)

    def polyline(self, pts, css: str, closed: bool = False):
        runs, run = [], []
        for p in pts:
            if p is None or not np.all(np.isfinite(p)) or not self.inside(p, pad=50.0):
                if len(run) > 1:
                    runs.append(run)
                run = []
            else:
                run.append(p)
        if len(run) > 1:
            runs.append(run)
        tag = "polygon" if closed and len(runs) == 1 and len(runs[0]) == len(pts) else "polyline"
        for r in runs:
            coords = " ".join(self.xy(p) for p in r)
            self.parts.append(f'<{tag} points="{coords}" {css}/>')

    def line(self, a, b, css: str):
        (x1, y1), (x2, y2) = self.xy(a).split(","), self.xy(b).split(",")
        self.parts.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {css}/>')

    def dot(self, p, label: str | None = None):
        x, y = self.xy(p).split(",")
        self.parts.append(f'<circle cx="{x}" cy="{y}" r="3" fill="black"/>')
        if label:
            self.parts.append(f'<text x="{_fmt(float(x) + 5)}" y="{_fmt(float(y) - 5)}" font-size="12">{label}</text>')

    def svg(self) -> bytes:
        width = _fmt((self.xmax - self.xmin) * SCALE)
        height = _fmt((self.ymax - self.ymin) * SCALE)
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
                f'viewBox="0 0 {width} {height}">')
        body = "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *self.parts, "</svg>"])
        return (body + "\n").encode("utf-8")


def _clip_polygon(poly, a, c):
    """Clip a convex polygon to the half-plane ``a . y <= c``."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = float(np.dot(a, p)) - c, float(np.dot(a, q)) - c
        if sp <= 0.0:
            out.append(p)
        if sp * sq < 0.0:
            out.append(p + (q - p) * (sp / (sp - sq)))
    return out


def _polytope_outline(body: HPolytope, canvas: _Canvas):
    pad = 10.0
    poly = [np.array(v, dtype=float) for v in (
        (canvas.xmin - pad, canvas.ymin - pad), (canvas.xmax + pad, canvas.ymin - pad),
        (canvas.xmax + pad, canvas.ymax + pad), (canvas.xmin - pad, canvas.ymax + pad))]
    kind = body.chart.kind
    for face in body.faces:
        n, c = face.normal, face.offset
        if kind == "euclidean":
            a, off = n, c
        elif kind == "hyperbolic":
            a, off = n[1:], n[0]
        else:
            a, off = n[1:], -n[0]
        poly = _clip_polygon(poly, a, off)
        if not poly:
            return []
    return poly


def _ball_outline(body: Ball):
    chart = body.chart
    c = body.center
    thetas = 2.0 * math.pi * np.arange(ARC_SAMPLES + 1) / ARC_SAMPLES
    if chart.kind == "euclidean":
        return [c + body.radius * np.array([math.cos(t), math.sin(t)]) for t in thetas]
    # orthonormal tangent frame at the center
    frame = sorted((chart.project_tangent(c, v) for v in np.eye(3)), key=lambda v: -chart.tangent_norm(c, v))
    e1 = frame[0] / chart.tangent_norm(c, frame[0])
    e2 = frame[1] - chart.form(frame[1], e1) * e1
    e2 = e2 / chart.tangent_norm(c, e2)
    return [_planar(chart, GeodesicRay(chart, c, math.cos(t) * e1 + math.sin(t) * e2).point(body.radius))
            for t in thetas]


def _scan_directions(ctx, apex):
    """Unit directions at ``apex`` (in angle order) whose rays meet the future body transversally."""
    body = ctx.body if isinstance(ctx, FunkContext) else ctx.future
    out = []
    for k in range(CONE_SAMPLES):
        theta = 2.0 * math.pi * k / CONE_SAMPLES
        u = np.array([math.cos(theta), math.sin(theta)])
        hit = body._first_hit(GeodesicRay(ctx.chart, apex, u))
        out.append((theta, u, hit if hit is not None and hit.transversal else None))
    return out


def _runs(scan):
    """Maximal cyclic runs of consecutive directions that hit."""
    hits = [h is not None for _, _, h in scan]
    if all(hits):
        return [scan]
    start = hits.index(False)
    order = scan[start:] + scan[:start]
    runs, run = [], []
    for item in order:
        if item[2] is not None:
            run.append(item)
        elif run:
            runs.append(run)
            run = []
    if run:
        runs.append(run)
    return runs


def render_svg(scene, overlays: Overlays | None = None) -> bytes:
    chart = scene.chart
    if chart.dimension != 2:
        raise RenderError("only two-dimensional scenes can be rendered")
    overlays = overlays or Overlays()
    canvas = _Canvas(overlays.view)
    for i, (body_id, body) in enumerate(sorted(scene.bodies.items())):
        css = f'fill="{COLORS[i % len(COLORS)]}" fill-opacity="0.25" stroke="{COLORS[i % len(COLORS)]}" stroke-width="1.5"'
        if isinstance(body, HPolytope):
            outline = _polytope_outline(body, canvas)
            if outline:
                canvas.polyline(outline, css, closed=True)
        else:
            canvas.polyline(_ball_outline(body), css, closed=True)
    ctx = scene.context
    apex = overlays.apex
    if apex is not None:
        planar_apex = _planar(chart, apex)
        if planar_apex is None:
            raise RenderError("the apex is not visible in this projection")
        if (overlays.cone or overlays.radii) and chart.kind == "euclidean" and isinstance(ctx, (FunkContext, HilbertContext)):
            scan = _scan_directions(ctx, apex)
            for run in _runs(scan):
                if overlays.cone:
                    for _, _, hit in (run[0], run[-1]):
                        canvas.line(apex, hit.point, 'stroke="black" stroke-dasharray="4 3" stroke-width="1"')
                for r in overlays.radii:
                    canvas.polyline([dilate(apex, hit.point, r) for _, _, hit in run],
                                    'fill="none" stroke="#ff7f0e" stroke-width="1.5"')
        elif overlays.cone or overlays.radii:
            raise RenderError("cones and future spheres are drawn for euclidean Funk and Hilbert scenes")
        if overlays.null:
            if not isinstance(ctx, ProjectiveDeSitterContext):
                raise RenderError("null directions are drawn for projective de Sitter scenes")
            for u in null_directions(ctx, apex):
                arc = [_planar(chart, math.cos(t) * apex + math.sin(t) * u) for t in np.linspace(0.0, 1.5, 151)]
                canvas.polyline(arc, 'fill="none" stroke="black" stroke-dasharray="4 3" stroke-width="1"')
        canvas.dot(planar_apex, "apex")
    for name, p in sorted(overlays.points.items()):
        q = _planar(chart, p)
        if q is not None:
            canvas.dot(q, name)
    return canvas.svg()
