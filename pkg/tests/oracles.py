"""Independent reference computations used by the tests.

These are written from first principles (closed forms, brute-force grids)
and share no code with the package.
"""

from __future__ import annotations

import math

import numpy as np


def ball_first_hit(p, q, center, radius):
    """Smallest s > 0 with |p + s u - c| = r for the unit direction u of q - p."""
    p, q, c = (np.asarray(v, dtype=float) for v in (p, q, center))
    u = (q - p) / np.linalg.norm(q - p)
    w = p - c
    b = float(u @ w)
    disc = b * b - (float(w @ w) - radius * radius)
    if disc <= 0:
        return None
    s = -b - math.sqrt(disc)
    return p + s * u if s > 0 else None


def funk_ball(p, q, center, radius):
    b = ball_first_hit(p, q, center, radius)
    return math.log(np.linalg.norm(b - p) / np.linalg.norm(b - np.asarray(q, dtype=float)))


def funk_ball_grid(p, q, center, radius, samples=200001):
    """Minimum of log(d(p, L)/d(q, L)) over tangent lines L of a disc separating q."""
    p, q, c = (np.asarray(v, dtype=float) for v in (p, q, center))
    theta = np.linspace(0.0, 2.0 * math.pi, samples)
    n = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    # tangent line {x : n.(x - c) = r}; body on the side n.(x - c) < r
    dp = (p - c) @ n.T - radius
    dq = (q - c) @ n.T - radius
    mask = (dq > 0) & (dp > 0)
    return float(np.min(np.log(dp[mask] / dq[mask])))


def strip_value(a, b):
    """Hilbert distance in (-1, 1) from a to b, via the cross ratio."""
    return math.log(((b + 1) * (1 - a)) / ((a + 1) * (1 - b)))


def halfspace_funk(p1, q1, wall):
    """Funk distance for the body {x1 > wall}, p1 < q1 < wall."""
    return math.log((wall - p1) / (wall - q1))


def sine_cross_ratio(angles):
    """Cross ratio of four points on one great circle given by arc angles."""
    a1, p, q, a2 = angles
    return (math.sin(a2 - p) * math.sin(q - a1)) / (math.sin(a2 - q) * math.sin(p - a1))


def desitter_point(t):
    return np.array([math.sinh(t), math.cosh(t)])


def desitter_sphere_image(t):
    x = np.array([math.sinh(t), math.cosh(t), 0.0])
    return x / np.linalg.norm(x)
