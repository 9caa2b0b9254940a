from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import halfspace_funk, strip_value
from timelike.bodies import Ball, HPolytope
from timelike.errors import DomainError, NotTimelikeDirectionError
from timelike.geometry import Chart
from timelike.hilbert import (
    funk_limit_check,
    funk_limit_sweep,
    hilbert_distance,
    hilbert_distance_cross_ratio,
    hilbert_functional,
    strip_closed_form,
    strip_context,
)
from timelike.order import HilbertContext
from timelike.sampling import draw, hilbert_chain, random_hilbert_context

E2 = Chart("euclidean", 2)
LOG3 = math.log(3.0)


def test_strip_sum_form():
    value = hilbert_distance(strip_context(), (0, 0), (0.5, 0))
    assert value.forward == pytest.approx(math.log(2))
    assert value.backward == pytest.approx(math.log(1.5))
    assert value.distance == pytest.approx(LOG3, abs=1e-12)


def test_strip_translation_independence():
    assert hilbert_distance(strip_context(), (0, 5), (0.5, -7)).distance == pytest.approx(LOG3, abs=1e-12)


def test_zero_distance():
    assert hilbert_distance(strip_context(), (0.2, 0.1), (0.2, 0.1)).distance == 0.0
    assert hilbert_distance_cross_ratio(strip_context(), (0.2, 0.1), (0.2, 0.1)).distance == 0.0


def test_cross_ratio_form():
    value = hilbert_distance_cross_ratio(strip_context(), (0, 0), (0.5, 0))
    assert np.allclose(value.a1, (-1, 0)) and np.allclose(value.a2, (1, 0))
    assert value.distance == pytest.approx(LOG3, abs=1e-12)


def test_sum_and_cross_ratio_agree_on_random_pairs():
    rng = np.random.default_rng(5)
    for kind in ("euclidean", "hyperbolic"):
        for _ in range(100):
            ctx = random_hilbert_context(rng, kind, 2)
            p, q, _ = draw(rng, lambda g: hilbert_chain(g, ctx))
            a = hilbert_distance(ctx, p, q).distance
            b = hilbert_distance_cross_ratio(ctx, p, q).distance
            assert abs(a - b) <= 1e-9 * max(1.0, a)


def test_functional():
    ctx = strip_context()
    assert hilbert_functional(ctx, (0, 0), (1, 0)).value == pytest.approx(2.0)
    assert hilbert_functional(ctx, (0, 0), (3, 0)).value == pytest.approx(6.0)
    with pytest.raises(NotTimelikeDirectionError):
        hilbert_functional(ctx, (0, 0), (0, 1))


@given(st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
def test_strip_formula_matches_cross_ratio(a, b):
    if a > b:
        a, b = b, a
    assert strip_closed_form(a, b) == pytest.approx(strip_value(a, b), abs=1e-12)
    if a < b - 1e-6:
        engine = hilbert_distance(strip_context(), (a, 0.0), (b, 0.0)).distance
        assert engine == pytest.approx(strip_value(a, b), rel=1e-9, abs=1e-12)


def test_strip_closed_form_examples():
    assert strip_closed_form(0, 0.5) == pytest.approx(LOG3)
    assert strip_closed_form(0.3, 0.3) == 0.0
    assert strip_closed_form(0.0, 1 - 1e-12) > 25
    with pytest.raises(DomainError):
        strip_closed_form(0.0, 1.0)


def test_funk_limit():
    body = HPolytope(E2, [((-1, 0), -1)])
    for a, bound in ((1e3, 1e-3), (1e6, 1e-6)):
        h, f = funk_limit_check(body, a, (0, 0), (0.5, 0))
        assert f == pytest.approx(halfspace_funk(0, 0.5, 1))
        assert abs(h - f) <= bound


def test_funk_limit_sweep_decreasing():
    sweep = funk_limit_sweep(HPolytope(E2, [((-1, 0), -1)]), (0, 0), (0.5, 0))
    assert sweep.decreasing and sweep.within_bound


def test_hilbert_overlap_rejected():
    from timelike.errors import ValidationError
    with pytest.raises(ValidationError):
        HilbertContext(Ball(E2, (0, 0), 1), Ball(E2, (1, 0), 1))
