"""Timelike Hilbert metric for an ordered (past, future) pair of bodies.

``H(p, q)`` is the future-body Funk distance from ``p`` to ``q`` plus the
past-body Funk distance from ``q`` back to ``p``.  Along the chord with
endpoints ``a1`` (past body) and ``a2`` (future body) it is the logarithm of a
kernel cross ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import ConvexBody, HPolytope
from .errors import (
    DomainError,
    NotInFutureError,
    NotTimelikeDirectionError,
    PreconditionError,
    TimelikeError,
)
from .funk import FinslerValue, _check_tangent, funk_distance, kernel_rate
from .geometry import Chart, kernel_cross_ratio
from .order import FunkContext, HilbertContext, _same

LIMIT_FIT_MIN_WALL = 10.0


@dataclass(frozen=True)
class HilbertValue:
    distance: float
    forward: float = 0.0
    backward: float = 0.0
    a1: np.ndarray | None = None
    a2: np.ndarray | None = None


def _ordered_chord(ctx: HilbertContext, p, q):
    p = ctx.chart.point(p)
    q = ctx.chart.point(q)
    if _same(p, q):
        ctx._require(p)
        return p, q, None
    chord = ctx.chord(p, q)
    if chord is None:
        raise NotInFutureError("q is not in the future of p")
    return p, q, chord


def hilbert_distance(ctx: HilbertContext, p, q) -> HilbertValue:
    """Sum form: ``F_future(p, q) + F_past(q, p)``."""
    p, q, chord = _ordered_chord(ctx, p, q)
    if chord is None:
        return HilbertValue(0.0)
    chart = ctx.chart
    forward = chart.kernel_log_ratio(chord.future_hit.t, chord.length)
    backward = chart.kernel_log_ratio(chord.past_hit.t, chord.length)
    return HilbertValue(
        forward + backward, forward, backward, chord.past_hit.point, chord.future_hit.point
    )


def hilbert_distance_cross_ratio(ctx: HilbertContext, p, q) -> HilbertValue:
    """Cross-ratio form ``log [a1, p, q, a2]`` with the chart kernel."""
    p, q, chord = _ordered_chord(ctx, p, q)
    if chord is None:
        return HilbertValue(0.0)
    a1, a2 = chord.past_hit.point, chord.future_hit.point
    value = math.log(kernel_cross_ratio(ctx.chart, a1, p, q, a2))
    return HilbertValue(value, a1=a1, a2=a2)


def hilbert_functional(ctx: HilbertContext, p, v) -> FinslerValue:
    """``P_future(p, v) + P_past(p, -v)``; ``t_star`` is the future hit parameter."""
    (p,) = ctx._require(p)
    v = _check_tangent(ctx.chart, p, v)
    forward = kernel_rate(ctx.future, ctx.chart, p, v)
    backward = kernel_rate(ctx.past, ctx.chart, p, -v)
    if forward.t_star is not None and not ctx._arc_ok(0.0, forward.t_star, backward.t_star):
        raise NotTimelikeDirectionError("the chord along v is longer than half a great circle")
    return FinslerValue(forward.value + backward.value, forward.t_star)


def strip_closed_form(a: float, b: float) -> float:
    """Hilbert distance of the interval ``(-1, 1)`` between ``a`` and ``b``."""
    for x in (a, b):
        if not -1.0 < x < 1.0:
            raise DomainError("strip coordinates must lie in (-1, 1)")
    if a == b:
        return 0.0
    return math.log((a - 1.0) / (b - 1.0) * (b + 1.0) / (a + 1.0))


def strip_context(width: float = 1.0, dimension: int = 2) -> HilbertContext:
    """Past wall ``{x1 < -width}`` and future wall ``{x1 > width}``."""
    chart = Chart("euclidean", dimension)
    e = np.zeros(dimension)
    e[0] = 1.0
    past = HPolytope(chart, [(e, -width)])
    future = HPolytope(chart, [(-e, -width)])
    return HilbertContext(past, future)


def retreating_wall(chart: Chart, a: float) -> HPolytope:
    e = np.zeros(chart.ambient_dim)
    e[0] = 1.0
    return HPolytope(chart, [(e, -a)])


def funk_limit_check(body: ConvexBody, a: float, p, q) -> tuple[float, float]:
    """``(H_a, F)`` where ``H_a`` uses the past wall ``{x1 < -a}``."""
    if body.chart.kind != "euclidean":
        raise PreconditionError("the retreating wall lives in the euclidean chart")
    funk = FunkContext(body)
    if not funk.precedes(p, q):
        raise PreconditionError("q is not in the Funk future of p")
    ctx = HilbertContext(retreating_wall(body.chart, a), body)
    if not ctx.precedes(p, q):
        raise PreconditionError("the wall is too close for the Hilbert order to hold")
    return hilbert_distance(ctx, p, q).distance, funk_distance(funk, p, q).distance


@dataclass(frozen=True)
class LimitSweep:
    walls: tuple[float, ...]
    gaps: tuple[float, ...]
    constant: float
    decreasing: bool
    within_bound: bool


def funk_limit_sweep(body: ConvexBody, p, q, walls=(10.0, 1e2, 1e3, 1e4, 1e5, 1e6)) -> LimitSweep:
    """Gaps ``|H_a - F|`` over increasing walls and the fitted ``C`` in ``gap <= C/a``."""
    walls = tuple(sorted(float(a) for a in walls))
    if len(walls) < 2:
        raise DomainError("need at least two wall distances")
    gaps = []
    for a in walls:
        h, f = funk_limit_check(body, a, p, q)
        gaps.append(abs(h - f))
    constant = max(gaps[-1] * walls[-1], gaps[-2] * walls[-2])
    decreasing = all(g2 <= g1 for g1, g2 in zip(gaps, gaps[1:]))
    # slack for rounding once the gap itself is at machine level
    slack = 1e-12
    within = all(g <= constant / a * (1.0 + 1e-6) + slack for a, g in zip(walls, gaps) if a >= LIMIT_FIT_MIN_WALL)
    if not math.isfinite(constant):
        raise TimelikeError("non-finite limit constant")
    return LimitSweep(walls, tuple(gaps), constant, decreasing, within)
