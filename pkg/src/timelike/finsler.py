"""Timelike curves, their Finsler length and the chord maximality check.

The length of a timelike curve is the integral of the context's Minkowski
functional along it.  Straight chords realize the distance; perturbed curves
with the same endpoints must not be longer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    CurveEvaluationError,
    PreconditionError,
    TimelikeError,
    UnsupportedRepresentationError,
)
from .funk import funk_distance, funk_functional
from .geometry import GeodesicRay, chart_distance
from .hilbert import hilbert_distance, hilbert_functional
from .order import FunkContext, HilbertContext, _same

DEFAULT_DENSITY = 2048
LENGTH_TOL = 1e-8
MAX_DEPTH = 40
INITIAL_PANELS = 8
MAXIMALITY_SLACK = 1e-6


class TimelikeCurve:
    """Curve on ``[0, 1]`` given by an evaluator ``t -> (point, tangent)``."""

    def __init__(self, evaluator: Callable[[float], tuple], density: int = DEFAULT_DENSITY):
        self.evaluator = evaluator
        self.density = int(density)
        if self.density < 2:
            raise ValueError("density must be at least 2")

    def __call__(self, t: float):
        try:
            x, v = self.evaluator(float(t))
        except TimelikeError:
            raise
        except Exception as exc:
            raise CurveEvaluationError(f"curve evaluation failed at t={t!r}: {exc}") from exc
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise CurveEvaluationError(f"non-finite curve value at t={t!r}")
        return x, v

    @classmethod
    def segment(cls, chart, p, q, density: int = DEFAULT_DENSITY) -> "TimelikeCurve":
        """Constant-speed geodesic from ``p`` to ``q``."""
        p, q = chart.point(p), chart.point(q)
        if _same(p, q):
            return cls(lambda t: (p, np.zeros_like(p)), density)
        length = chart_distance(chart, p, q)
        ray = GeodesicRay.from_direction(chart, p, q - p)
        if chart.kind == "euclidean":
            return cls(lambda t: (p + t * (q - p), q - p), density)
        return cls(lambda t: (ray.point(t * length), length * ray.tangent(t * length)), density)

    @classmethod
    def from_ambient(cls, chart, path, velocity, density: int = DEFAULT_DENSITY) -> "TimelikeCurve":
        """Curve ``t -> N(path(t))`` where ``N`` normalizes onto the chart.

        ``velocity`` is the derivative of ``path``; the tangent of the
        normalized curve is computed exactly.
        """
        kind = chart.kind

        def evaluate(t):
            y = np.asarray(path(t), dtype=float)
            dy = np.asarray(velocity(t), dtype=float)
            if kind == "euclidean":
                return y, dy
            if kind == "spherical":
                norm = float(np.linalg.norm(y))
                x = y / norm
                return x, (dy - np.dot(x, dy) * x) / norm
            form = -y[0] * y[0] + float(np.dot(y[1:], y[1:]))
            if not form < 0.0 or y[0] <= 0.0:
                raise CurveEvaluationError("ambient path left the future light cone")
            scale = math.sqrt(-form)
            x = y / scale
            pairing = -x[0] * dy[0] + float(np.dot(x[1:], dy[1:]))
            return x, (dy + pairing * x) / scale

        return cls(evaluate, density)

    def restricted(self, a: float, b: float) -> "TimelikeCurve":
        """The piece over ``[a, b]``, reparametrized to ``[0, 1]``."""
        span = b - a

        def evaluate(t):
            x, v = self(a + t * span)
            return x, span * v

        return TimelikeCurve(evaluate, self.density)

    def reparametrized(self, phi: Callable[[float], float], dphi: Callable[[float], float]) -> "TimelikeCurve":
        """``t -> curve(phi(t))`` for a monotone ``phi`` of ``[0, 1]`` onto itself."""

        def evaluate(t):
            x, v = self(phi(t))
            return x, dphi(t) * v

        return TimelikeCurve(evaluate, self.density)

    def concatenated(self, other: "TimelikeCurve", split: float = 0.5) -> "TimelikeCurve":
        """This curve on ``[0, split]`` followed by ``other`` on ``[split, 1]``."""

        def evaluate(t):
            if t <= split:
                x, v = self(t / split)
                return x, v / split
            x, v = other((t - split) / (1.0 - split))
            return x, v / (1.0 - split)

        return TimelikeCurve(evaluate, min(self.density, other.density))


def functional(ctx, x, v) -> float:
    """The Minkowski functional of a Funk or Hilbert-type context."""
    if isinstance(ctx, FunkContext):
        return funk_functional(ctx, x, v).value
    if isinstance(ctx, HilbertContext):
        return hilbert_functional(ctx, x, v).value
    raise UnsupportedRepresentationError(f"no functional for {type(ctx).__name__}")


def distance(ctx, p, q) -> float:
    if isinstance(ctx, FunkContext):
        return funk_distance(ctx, p, q).distance
    if isinstance(ctx, HilbertContext):
        return hilbert_distance(ctx, p, q).distance
    raise UnsupportedRepresentationError(f"no distance for {type(ctx).__name__}")


def _integrand(ctx, curve: TimelikeCurve, t: float) -> float:
    x, v = curve(t)
    return functional(ctx, x, v)


def is_timelike(ctx, curve: TimelikeCurve) -> tuple[bool, float | None]:
    """Check the tangent lies in the timelike cone at every validation sample.

    Zero tangents are accepted: they contribute nothing to the length.
    """
    for t in np.linspace(0.0, 1.0, curve.density):
        x, v = curve(t)
        if not ctx.admissible(x):
            return False, float(t)
        if not np.any(v):
            continue
        try:
            functional(ctx, x, v)
        except (PreconditionError, ValueError, TimelikeError) as exc:
            if isinstance(exc, CurveEvaluationError):
                raise
            return False, float(t)
    return True, None


def _simpson(fa, fm, fb, width):
    return width * (fa + 4.0 * fm + fb) / 6.0


def integrate(f: Callable[[float], float], a: float = 0.0, b: float = 1.0, tol: float = LENGTH_TOL) -> float:
    """Adaptive Simpson quadrature with Richardson stopping.

    Intervals are refined depth-first in a fixed order, so the result is
    deterministic for a deterministic integrand.
    """
    edges = np.linspace(a, b, INITIAL_PANELS + 1)
    total = 0.0
    panel_tol = tol / INITIAL_PANELS
    for lo, hi in zip(edges[:-1], edges[1:]):
        lo, hi = float(lo), float(hi)
        mid = 0.5 * (lo + hi)
        flo, fmid, fhi = f(lo), f(mid), f(hi)
        stack = [(lo, hi, flo, fmid, fhi, _simpson(flo, fmid, fhi, hi - lo), panel_tol, 0)]
        while stack:
            lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
            mid = 0.5 * (lo + hi)
            fl, fr = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
            left = _simpson(flo, fl, fmid, mid - lo)
            right = _simpson(fmid, fr, fhi, hi - mid)
            delta = left + right - whole
            if depth >= MAX_DEPTH or abs(delta) <= 15.0 * eps:
                total += left + right + delta / 15.0
                continue
            stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
            stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
    return total


def curve_length(ctx, curve: TimelikeCurve, tol: float = LENGTH_TOL, validate: bool = True) -> float:
    if validate:
        ok, where = is_timelike(ctx, curve)
        if not ok:
            raise PreconditionError(f"curve is not timelike (first violation at t={where!r})")
    return integrate(lambda t: _integrand(ctx, curve, t), tol=tol)


@dataclass(frozen=True)
class MaximalityReport:
    chord: float
    chord_length: float
    accepted: int
    rejected: int
    max_length: float
    max_excess: float
    passed: bool


def _perturbed_curve(chart, p, q, coefficients, directions, density):
    """Chord plus endpoint-fixed ``sin(k pi t)`` bumps in ambient coordinates."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    ks = np.arange(1, len(coefficients) + 1)

    def path(t):
        bump = np.sin(ks * math.pi * t) @ (coefficients[:, None] * directions)
        return p + t * (q - p) + bump

    def velocity(t):
        dbump = (ks * math.pi * np.cos(ks * math.pi * t)) @ (coefficients[:, None] * directions)
        return (q - p) + dbump

    if chart.kind == "euclidean":
        return TimelikeCurve(lambda t: (path(t), velocity(t)), density)
    return TimelikeCurve.from_ambient(chart, path, velocity, density)


def maximality_check(ctx, p, q, m: int = 200, amplitude: float = 0.05, seed: int = 0,
                     modes: int = 3, density: int = 256, tol: float = LENGTH_TOL) -> MaximalityReport:
    """Lengths of ``m`` random timelike perturbations of the chord from ``p`` to ``q``.

    Each perturbation is a sum of ``modes`` sine bumps with random ambient
    directions.  A non-timelike candidate has its amplitude halved (up to
    eight times) before it is rejected.
    """
    chart = ctx.chart
    p, q = chart.point(p), chart.point(q)
    if not ctx.precedes(p, q):
        raise PreconditionError("q is not in the future of p")
    chord = distance(ctx, p, q)
    chord_length = curve_length(ctx, TimelikeCurve.segment(chart, p, q, density), tol=tol)
    rng = np.random.default_rng(seed)
    scale = float(np.linalg.norm(q - p))
    accepted = rejected = 0
    best = -math.inf
    for _ in range(m):
        coefficients = rng.uniform(-1.0, 1.0, modes) / np.arange(1, modes + 1)
        directions = rng.standard_normal((modes, chart.ambient_dim))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        eps = amplitude * scale
        curve = None
        for _attempt in range(9):
            candidate = _perturbed_curve(chart, p, q, eps * coefficients, directions, density)
            try:
                ok, _ = is_timelike(ctx, candidate)
            except CurveEvaluationError:
                ok = False
            if ok:
                curve = candidate
                break
            eps *= 0.5
        if curve is None:
            rejected += 1
            continue
        accepted += 1
        best = max(best, curve_length(ctx, curve, tol=tol, validate=False))
    excess = best - chord if accepted else -math.inf
    return MaximalityReport(chord, chord_length, accepted, rejected, best, excess,
                            excess <= MAXIMALITY_SLACK)
