"""Inverse iteration, limit-set distances, and the uniform bound."""

import cmath
import math
import random

import pytest

from perivar.julia import (
    SingularInputError,
    a_s_bw_bound_check,
    backward_orbit,
    convergence_report,
    dist_to_jinf,
    fit_loglog_slope,
    inverse_step,
    jinf_points,
    r_eps,
    sample_julia,
)

H = 0.6


def _forward(z, h, hp):
    return z * (hp + z) / (1 + h * z)


def test_integrable_branches_are_exact():
    hp = 1 / 0.5
    for z in (0.3 + 0.2j, -1.1, 2j):
        assert inverse_step(z, 0.5, hp, "A") == 0.5 * z
        assert inverse_step(z, 0.5, hp, "B") == -hp


def test_forward_inverse_identity():
    rng = random.Random(2)
    for eps in (1e-1, 1e-2, 1e-3):
        hp = (1 + eps) / H
        for _ in range(40):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            for branch in "AB":
                w = inverse_step(z, H, hp, branch)
                assert abs(_forward(w, H, hp) - z) < 1e-10 * (1 + abs(z))


def test_singular_input_raises():
    hp = (1 + 1e-2) / H
    with pytest.raises(SingularInputError):
        inverse_step(-hp / H, H, hp, "A")


def test_branch_argument_validated():
    with pytest.raises(ValueError):
        inverse_step(0.1, H, (1 + 1e-2) / H, "C")


def test_e_term_bounded_by_r_eps():
    rng = random.Random(3)
    for eps in (1e-1, 1e-2, 1e-3):
        hp = (1 + eps) / H
        R = r_eps(H, eps)
        for _ in range(10_000):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            try:
                E = inverse_step(z, H, hp, "A") - H * z
            except SingularInputError:
                continue
            assert abs(E) <= R * (1 + 1e-12)


def test_integrable_samples_live_in_jn_exactly():
    h, hp = 0.5, 2.0  # h * hp exactly 1 in floating point
    samples = sample_julia(h, hp, depth=6, count=64, seed=1)
    pts = jinf_points(h, hp, 10)
    for s in samples:
        assert s.dist_to_jinf == 0.0
        assert min(abs(s.z - p) for p in pts) == 0.0


def test_exhaustive_tree_counts():
    h, hp = 0.5, 2.0
    cumulative = set()
    for depth in range(0, 6):
        samples = sample_julia(h, hp, depth, count=2**depth, seed=0) if depth else []
        level = {s.z for s in samples}
        if depth:
            assert len(samples) == 2**depth
        cumulative |= level
    cumulative.add(0j)
    # distinct preimages collapse in the integrable limit: exactly depth+1
    # distinct values survive at each level, n+1 overall
    assert cumulative == set(jinf_points(h, hp, 5))


def test_exhaustive_enumeration_covers_the_whole_tree():
    # the cumulative enumeration through depth n visits 2^(n+1)-1 tree nodes
    eps = 0.3
    hp = (1 + eps) / H
    nodes = 1  # the root
    for depth in range(1, 7):
        samples = sample_julia(H, hp, depth, count=2**depth, seed=0)
        assert len(samples) == 2**depth
        assert len({s.branch_word for s in samples}) == 2**depth
        nodes += len(samples)
    assert nodes == 2**7 - 1
    # 0 is fixed under the A-branch, so values (unlike words) collapse: every
    # point is already reachable by a word with no leading A run
    deep = sample_julia(H, hp, 6, count=64, seed=0)
    b_started = {s.z for s in deep if s.branch_word.startswith("B")}
    shallow = set()
    for d in range(1, 6):
        shallow |= {
            s.z for s in sample_julia(H, hp, d, count=2**d, seed=0) if s.branch_word.startswith("B")
        }
    assert {s.z for s in deep} <= b_started | shallow | {0j}


def test_sampling_is_deterministic_per_seed():
    hp = (1 + 1e-2) / H
    a = sample_julia(H, hp, 12, 100, seed=9)
    b = sample_julia(H, hp, 12, 100, seed=9)
    assert [(s.z, s.branch_word) for s in a] == [(s.z, s.branch_word) for s in b]
    c = sample_julia(H, hp, 12, 100, seed=10)
    assert [s.branch_word for s in a] != [s.branch_word for s in c]


def test_inverse_forward_identity_on_samples():
    hp = (1 + 1e-2) / H
    for s in sample_julia(H, hp, 8, 50, seed=4):
        parent, _ = backward_orbit(H, hp, s.branch_word[:-1])
        assert abs(_forward(s.z, H, hp) - parent) < 1e-10 * (1 + abs(parent))


def test_uniform_bound_on_samples():
    for eps in (1e-1, 1e-2, 1e-3):
        hp = (1 + eps) / H
        bound = r_eps(H, eps) / (1 - abs(H))
        for s in sample_julia(H, hp, 12, 500, seed=7):
            if not s.crossed_cut:
                assert s.dist_to_jinf <= bound


def test_convergence_report_columns():
    rows = convergence_report(H, [1e-1, 1e-2, 1e-3], depth=10, count=300, seed=3)
    for row in rows:
        assert row["ratio"] <= 1.0
        assert row["max_dist"] <= row["bound"]
    rows0 = convergence_report(H, [0.0], depth=8, count=100, seed=3)
    assert rows0[0]["max_dist"] == 0.0


def test_workers_do_not_change_results():
    serial = convergence_report(H, [1e-2], depth=10, count=64, seed=5, workers=1)
    parallel = convergence_report(H, [1e-2], depth=10, count=64, seed=5, workers=2)
    assert serial == parallel


def test_fit_loglog_slope_exact_line():
    xs = [1e-1, 1e-2, 1e-3]
    ys = [2 * x**0.5 for x in xs]
    assert abs(fit_loglog_slope(xs, ys) - 0.5) < 1e-12


def test_a_s_bw_bound_check_examples():
    hp = (1 + 1e-3) / H
    r0 = a_s_bw_bound_check(H, hp, s=0, trials=200, seed=1)
    assert r0["violations"] == 0 and r0["bound"] > 0
    r3 = a_s_bw_bound_check(H, hp, s=3, trials=1000, seed=2)
    assert r3["violations"] == 0
    # integrable limit: the tested quantity vanishes identically
    h0, hp0 = 0.5, 2.0
    for s in (0, 2, 5):
        r = a_s_bw_bound_check(h0, hp0, s=s, trials=50, seed=3)
        assert r["violations"] == 0 and r["max_ratio"] == 0.0
