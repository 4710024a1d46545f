"""Invariant-variety predicates on the concrete maps."""

import cmath
import random

import numpy as np
import pytest

from perivar import maps
from perivar.maps import MapId, StatePoint
from perivar.polycore import MultiPoly
from perivar.variety import (
    gamma2_full,
    lv_gamma_rs,
    lv_level_set_point,
    mobius_gamma,
    verify_variety_2d,
    verify_variety_lv,
)


def test_mobius_gamma_small_cases():
    (h,) = MultiPoly.variables("h")
    one = MultiPoly.const(("h",), 1)
    assert mobius_gamma(2) == h + one
    assert mobius_gamma(1) == one
    assert mobius_gamma(4) == h**3 + h**2 + h + one


def test_mobius_gamma_roots_are_unit_roots():
    g = mobius_gamma(5)
    coeffs = [1, 1, 1, 1, 1]
    roots = np.roots(coeffs)
    want = [cmath.exp(2j * cmath.pi * k / 5) for k in range(1, 5)]
    for r in roots:
        assert min(abs(r - w) for w in want) < 1e-10


def test_gamma2_full_x_independence_at_c0():
    h = 0.37 - 0.21j
    vals = {gamma2_full(h, x, 0.8, 0.0) for x in (0.1, -2.3, 5.0)}
    assert len({f"{v:.15g}" for v in vals}) == 1
    assert abs(next(iter(vals)) - (h + 1)) < 1e-14


def test_gamma2_roots_are_period2_points():
    # with c != 0 the condition picks isolated points; check they return
    h, b, c = 0.8 + 0.3j, 0.6, 0.35
    # gamma2(h, x) = 0 is quadratic in x: h+1 + chx(chx + bx - 1 - h)/(1-bx) = 0
    # clear the denominator: (h+1)(1-bx) + chx(chx + bx - 1 - h) = 0
    c2 = c * h * (c * h + b)
    c1 = -(h + 1) * b - c * h * (1 + h)
    c0 = h + 1
    roots = np.roots([c2, c1, c0])
    step = maps.reduce_two_dim(b, c, h)
    for x in roots:
        x = complex(x)
        assert abs(gamma2_full(h, x, b, c)) < 1e-9
        assert abs(step(step(x)) - x) < 1e-8 * (1 + abs(x))
        assert abs(step(x) - x) > 1e-3  # genuinely period 2, not fixed


def test_gamma2_b_equals_c_is_x_independent():
    h, b = 0.45 + 0.2j, 0.52
    vals = [gamma2_full(h, x, b, b) for x in (0.2, 1.7, -0.9)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-12


def test_verify_2d_varieties():
    for n in (2, 3, 4):
        rep = verify_variety_2d(n, b=0.7 + 0.2j, k=1, samples=100, seed=n)
        assert rep.passes == rep.samples == 100
        assert rep.max_return_residual < 1e-8
        assert rep.negative_control_min_distance > 1e-3
        assert rep.max_intermediate_invariant_drift < 1e-10
        assert rep.min_premature_return_distance > 1e-3


def test_verify_2d_primitive_root_required():
    with pytest.raises(ValueError):
        verify_variety_2d(4, b=0.5, k=2, samples=10)
    with pytest.raises(ValueError):
        verify_variety_2d(3, b=0.5, k=3, samples=10)


def test_lv_level_set_construction():
    rng = random.Random(1)
    for _ in range(50):
        r = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        s = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        x = complex(rng.uniform(0.2, 1.8), rng.uniform(-1, 1))
        try:
            pt = lv_level_set_point(r, s, x)
        except ValueError:
            continue
        rr, ss = maps.invariants_of(MapId.LV3, pt, {})
        assert abs(rr - r) < 1e-9 and abs(ss - s) < 1e-9


def test_verify_lv_period3():
    rep = verify_variety_lv(3, samples=100, seed=11)
    assert rep.passes == rep.samples == 100
    assert rep.max_return_residual < 1e-8
    assert rep.negative_control_min_distance > 1e-3
    assert rep.max_intermediate_invariant_drift < 1e-10


def test_lv_gamma_rs_vanishes_on_sampled_locus():
    g3 = lv_gamma_rs(3)
    rng = random.Random(3)
    # pick s, solve the quadratic in r directly, confirm the factor vanishes
    for _ in range(20):
        s = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        disc = cmath.sqrt((1 - s) ** 2 - 4 * (s * s + s + 1))
        for sign in (1, -1):
            r = (-(1 - s) + sign * disc) / 2
            assert abs(g3.evaluate({"r": r, "s": s})) < 1e-9


def test_verify_lv_rejects_unknown_period():
    with pytest.raises(ValueError):
        verify_variety_lv(6, samples=5)
