from __future__ import annotations

import math

import numpy as np
import pytest

from timelike.bodies import Ball, HPolytope
from timelike.geometry import Chart
from timelike.hilbert import strip_context
from timelike.order import (
    FunkContext,
    PairClass,
    ProjectiveDeSitterContext,
    classify_pair,
    funk_precedes,
    hilbert_precedes,
    inclusion_precedes,
)
from timelike.sampling import funk_chain, hilbert_chain, random_body, random_hilbert_context, draw

E2 = Chart("euclidean", 2)
S2 = Chart("spherical", 2)


def ball_ctx():
    return FunkContext(Ball(E2, (0, 0), 1.0))


def square_ctx():
    return FunkContext(HPolytope(E2, [((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)]))


def test_funk_precedes_examples():
    ctx = ball_ctx()
    assert funk_precedes(ctx, (-2, 0), (-1.5, 0))
    assert not funk_precedes(ctx, (-2, 0), (2, 0))
    assert not funk_precedes(ctx, (-2, 0), (-2, 0))


def test_inclusion_precedes_examples():
    ctx = square_ctx()
    assert inclusion_precedes(ctx, (-3, 0), (-2, 0))
    assert not inclusion_precedes(ctx, (-2, 0), (0, -2))
    assert not inclusion_precedes(ctx, (-2, 0), (-2, 0))


def test_hilbert_precedes_examples():
    ctx = strip_context()
    assert hilbert_precedes(ctx, (0, 0), (0.5, 3))
    assert not hilbert_precedes(ctx, (0, 0), (0, 1))
    assert not hilbert_precedes(ctx, (0.5, 3), (0, 0))


def test_classify():
    ctx = ball_ctx()
    assert classify_pair(ctx, (-2, 0), (-1.5, 0)) == PairClass.TIMELIKE
    assert classify_pair(ctx, (-2, 0), (-2, 3)) == PairClass.UNRELATED
    assert classify_pair(ctx, (-2, 0), (-2, 0)) == PairClass.COINCIDENT


def test_classify_null_chord_in_desitter_configuration():
    ctx = ProjectiveDeSitterContext(Ball(S2, (-1, 0, 0), math.pi / 4))
    # the great circle {x2 = x0 tan(pi/4) ... } tangent to both caps: normal at angle pi/4 from e0
    n = np.array([1.0, 0.0, 1.0]) / math.sqrt(2)
    u = np.array([0.0, 1.0, 0.0])
    w = np.cross(n, u)
    p = math.cos(1.2) * u + math.sin(1.2) * w
    q = math.cos(1.6) * u + math.sin(1.6) * w
    assert classify_pair(ctx, p, q) == PairClass.NULL


def test_order_equivalence_and_antisymmetry_random():
    rng = np.random.default_rng(11)
    for _ in range(200):
        ctx = FunkContext(random_body(rng, "euclidean", 2, "polytope"))
        p, q, r = draw(rng, lambda g: funk_chain(g, ctx))
        assert funk_precedes(ctx, p, q) == inclusion_precedes(ctx, p, q)
        assert funk_precedes(ctx, p, r) and inclusion_precedes(ctx, p, r)
        assert not funk_precedes(ctx, q, p)
        other = ctx.body.sample_exterior(rng, 1, 4.0)[0]
        assert funk_precedes(ctx, p, other) == inclusion_precedes(ctx, p, other)


def test_hilbert_antisymmetry_random():
    rng = np.random.default_rng(12)
    for _ in range(100):
        ctx = random_hilbert_context(rng, "euclidean", 2)
        p, q, _ = draw(rng, lambda g: hilbert_chain(g, ctx))
        assert hilbert_precedes(ctx, p, q)
        assert not hilbert_precedes(ctx, q, p)
