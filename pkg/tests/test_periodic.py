"""Periodic points of the normal-form map: composition, counting, fossils."""

import cmath
import random

import numpy as np
import pytest

from perivar.periodic import (
    PeriodicPoint,
    RationalFunc1D,
    compose_n,
    cycle_multiplier,
    dist_to_fossils,
    expected_count,
    fossil_points,
    iterate_map,
    max_fossil_distance,
    periodic_points,
    transition_scan,
)

H_GEN, HP_GEN = 0.6 + 0.1j, 2.1 + 0j


def test_compose_n1_coefficients():
    rat = compose_n(0.5, 3.0, 1)
    assert rat.numer == (0, 3.0, 1)
    assert rat.denom == (1, 0.5)


def test_compose_integrable_cancellation():
    h = 0.5  # chosen so h * (1/h) is exactly 1 in floating point
    rat = compose_n(h, 1 / h, 4)
    assert rat.degree == 1
    z = 0.7 - 0.2j
    assert abs(rat(z) - z / h**4) < 1e-12


def test_compose_degree_doubles():
    for n in (2, 3, 4):
        rat = compose_n(H_GEN, HP_GEN, n)
        assert len(rat.numer) - 1 == 2**n
        assert rat.degree_bound == 2**n


def test_compose_agrees_with_iteration():
    rng = random.Random(6)
    rat = compose_n(H_GEN, HP_GEN, 3)
    for _ in range(20):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        assert abs(rat(z) - iterate_map(z, H_GEN, HP_GEN, 3)) < 1e-9 * (1 + abs(z))


def test_compose_bounds_validated():
    with pytest.raises(ValueError):
        compose_n(H_GEN, HP_GEN, 0)
    with pytest.raises(ValueError):
        compose_n(H_GEN, HP_GEN, 11)


def test_fixed_points_and_multipliers():
    pts = periodic_points(H_GEN, HP_GEN, 1)
    by_kind = {}
    for p in pts:
        key = "inf" if p.is_infinity else ("zero" if abs(p.z) < 1e-12 else "zp")
        by_kind[key] = p
    assert set(by_kind) == {"zero", "zp", "inf"}
    assert by_kind["zero"].multiplier == HP_GEN
    zp = (1 - HP_GEN) / (1 - H_GEN)
    assert abs(by_kind["zp"].z - zp) < 1e-12
    want = (2 - H_GEN - HP_GEN) / (1 - H_GEN * HP_GEN)
    assert abs(by_kind["zp"].multiplier - want) < 1e-12
    assert by_kind["inf"].multiplier == H_GEN


def test_counts_follow_divisor_formula():
    assert [expected_count(n) for n in range(2, 10)] == [2, 6, 12, 30, 54, 126, 240, 504]
    for n in range(2, 8):
        pts = periodic_points(H_GEN, HP_GEN, n)
        assert len(pts) == expected_count(n), n
        assert all(p.residual < 1e-8 for p in pts)


def test_counts_against_mobius_sum():
    # independent cross-check: sum over divisors of exact counts telescopes
    # to the full 2^n (finite solutions including both finite fixed points)
    for n in range(2, 9):
        total = 2 + sum(expected_count(m) for m in range(2, n + 1) if n % m == 0)
        assert total == 2**n


def test_period_sets_disjoint_across_divisors():
    pts4 = periodic_points(H_GEN, HP_GEN, 4)
    pts2 = periodic_points(H_GEN, HP_GEN, 2)
    pts1 = [p for p in periodic_points(H_GEN, HP_GEN, 1) if not p.is_infinity]
    allpts = [(p.z, p.period) for p in pts4 + pts2 + pts1]
    assert len(allpts) == 12 + 2 + 2
    for i, (z1, n1) in enumerate(allpts):
        for z2, n2 in allpts[i + 1 :]:
            assert abs(z1 - z2) > 1e-7


def test_cycle_closure_and_membership():
    for n in (2, 3, 4):
        pts = periodic_points(H_GEN, HP_GEN, n)
        zs = [p.z for p in pts]
        for p in pts:
            img = iterate_map(p.z, H_GEN, HP_GEN, 1)
            # the image of a period-n point is another listed period-n point
            assert min(abs(img - w) for w in zs) < 1e-8 * (1 + abs(img))
            back = iterate_map(p.z, H_GEN, HP_GEN, n)
            assert abs(back - p.z) < 1e-8 * (1 + abs(p.z))


def test_multiplier_invariant_around_cycle():
    pts = periodic_points(H_GEN, HP_GEN, 3)
    for p in pts:
        lam_here = cycle_multiplier(p.z, H_GEN, HP_GEN, 3)
        lam_next = cycle_multiplier(iterate_map(p.z, H_GEN, HP_GEN, 1), H_GEN, HP_GEN, 3)
        assert abs(lam_here - lam_next) / abs(lam_here) < 1e-6
        assert abs(p.multiplier - lam_here) / abs(lam_here) < 1e-9


def test_brute_force_grid_oracle_small_periods():
    # independent oracle: dense grid + Newton on the rational composition
    rng = random.Random(15)
    for n in (2, 3):
        rat = compose_n(H_GEN, HP_GEN, n)
        found = []
        for _ in range(4000):
            z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            for _ in range(60):
                fz = iterate_map(z, H_GEN, HP_GEN, n) - z
                lam = cycle_multiplier(z, H_GEN, HP_GEN, n)
                if lam == 1:
                    break
                zn = z - fz / (lam - 1)
                if abs(zn - z) < 1e-13 * (1 + abs(z)):
                    z = zn
                    break
                z = zn
            if abs(iterate_map(z, H_GEN, HP_GEN, n) - z) < 1e-10 * (1 + abs(z)):
                if all(abs(z - w) > 1e-6 * (1 + abs(z)) for w in found):
                    found.append(z)
        reported = periodic_points(H_GEN, HP_GEN, n)
        report_zs = [p.z for p in reported]
        # every reported exact-period point appears in the grid harvest
        matched = 0
        for z in report_zs:
            if min(abs(z - w) for w in found) < 1e-6 * (1 + abs(z)):
                matched += 1
        assert matched == len(report_zs)
        # and the harvest contains no extra exact-period-n points
        lower = [p.z for m in range(1, n) if n % m == 0 for p in periodic_points(H_GEN, HP_GEN, m) if not p.is_infinity]
        extras = [
            z
            for z in found
            if min(abs(z - w) for w in report_zs) > 1e-6 * (1 + abs(z))
            and min(abs(z - w) for w in lower) > 1e-6 * (1 + abs(z))
        ]
        assert not extras


def test_integrable_locus_has_no_isolated_points():
    h = 0.7
    assert periodic_points(h, 1 / h, 4) == []


def test_fossil_lists():
    h = 0.5 + 0.1j
    assert fossil_points(h, 2) == [-1 / h, -1]
    assert fossil_points(2.0, 4) == [-0.5, -1.0, -2.0, -4.0]


def test_fossil_convergence_linear_in_delta():
    h = 0.7
    rows = transition_scan(h, 4, [1e-2, 1e-3, 1e-4])
    maxd = [max_fossil_distance(rows, d, 4) for d in (1e-2, 1e-3, 1e-4)]
    for d, md in zip((1e-2, 1e-3, 1e-4), maxd):
        assert md < 10 * d  # within K*delta with a modest constant
    # halving delta halves the distance to within 20%
    for a, b in zip(maxd, maxd[1:]):
        assert abs(a / b / 10 - 1) < 0.2


def test_fossil_convergence_smaller_periods_too():
    h = 0.7
    for n in (2, 3, 5):
        delta = 1e-4
        pts = periodic_points(h, (1 + delta) / h, n)
        assert len(pts) == expected_count(n)
        worst = max(dist_to_fossils(p.z, h, n) for p in pts)
        assert worst < 10 * delta


def test_transition_scan_rows_and_monotonicity():
    h = 0.7
    deltas = [1e-2, 1e-3, 1e-4]
    rows = transition_scan(h, 4, deltas)
    for d in deltas:
        assert sum(1 for r in rows if r["delta"] == d) == expected_count(4)
    series = [max_fossil_distance(rows, d, 4) for d in deltas]
    assert series[0] > series[1] > series[2]
    with pytest.raises(ValueError):
        transition_scan(h, 3, [1e-2, 0.0])


def test_near_integrable_multipliers_explode_not_neutralize():
    # the isolated points keep |multiplier| far above 1 all the way down:
    # they vanish at the limit rather than going neutral
    h = 0.7
    prev = None
    for delta in (1e-2, 1e-3):
        pts = periodic_points(h, (1 + delta) / h, 4)
        top = max(abs(p.multiplier) for p in pts)
        assert top > 1 / delta
        if prev is not None:
            assert top > prev
        prev = top
