"""Verification of invariant varieties of periodic points on concrete maps.

A periodicity condition is "fully correlated" when it constrains only the
values of the invariants, not the position on the level set: the vanishing
locus of a polynomial in the invariants alone then consists entirely of
periodic points.  These verifiers sample such a locus, iterate the actual
map, and demand exact-period returns, with generic off-locus points as
negative controls.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import maps
from .biquad import gamma_series, lv_gamma
from .maps import MapId, PoleError, StatePoint
from .polycore import MultiPoly


@dataclass(frozen=True)
class VarietyCondition:
    map_id: MapId
    period: int
    gamma: MultiPoly  # polynomial purely in invariant symbols
    description: str


@dataclass
class VarietyReport:
    condition: str
    period: int
    samples: int
    passes: int
    resamples: int
    max_return_residual: float
    negative_control_min_distance: float
    max_intermediate_invariant_drift: float = 0.0
    min_premature_return_distance: float = math.inf

    @property
    def all_passed(self) -> bool:
        return self.passes == self.samples

    def to_json_obj(self) -> dict:
        return {
            "condition": self.condition,
            "period": self.period,
            "samples": self.samples,
            "passes": self.passes,
            "resamples": self.resamples,
            "max_return_residual": self.max_return_residual,
            "negative_control_min_distance": self.negative_control_min_distance,
        }


def mobius_gamma(n: int) -> MultiPoly:
    """Period-n condition of the one-dimensional degree-1 reduction:
    1 + h + ... + h^(n-1)."""
    if n < 1:
        raise ValueError("n must be positive")
    return MultiPoly(("h",), {(k,): 1 for k in range(n)})


def gamma2_full(h: complex, x: complex, b: complex, c: complex) -> complex:
    """The full period-2 condition of the (b, c) family before the
    integrable limit; at c = 0 the x-dependence cancels and h + 1 is left."""
    den = 1 - b * x
    if abs(den) < 1e-14 * (1 + abs(x)):
        raise PoleError("1 - b*x")
    return h + 1 + c * h * x * (c * h * x + b * x - 1 - h) / den


def _disk_sample(rng: random.Random, radius: float = 2.0) -> complex:
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(z) <= radius:
            return z


CONSTRUCT_TOL = 1e-12
RETURN_TOL = 1e-8
NEGATIVE_TOL = 1e-3
ON_VARIETY_TOL = 1e-9


def verify_variety_2d(n: int, b: complex, k: int, samples: int, seed: int = 0) -> VarietyReport:
    """Sample the locus y(1-bx) = exp(2 pi i k/n) of the c=0 planar map and
    assert exact period-n return, staying on the level set throughout."""
    if not 1 <= k <= n - 1:
        raise ValueError("k must satisfy 1 <= k <= n-1")
    if math.gcd(k, n) != 1:
        raise ValueError("k must be coprime to n for an exact period-n variety")
    rng = random.Random(seed)
    omega = cmath.exp(2j * cmath.pi * k / n)
    params = {"b": b, "c": 0.0}
    passes = 0
    resamples = 0
    max_resid = 0.0
    max_drift = 0.0
    min_premature = math.inf
    done = 0
    while done < samples:
        x = _disk_sample(rng)
        if abs(1 - b * x) < 1e-6:
            resamples += 1
            continue
        y = omega / (1 - b * x)
        start = StatePoint((x, y))
        try:
            pt = start
            premature = math.inf
            for step in range(1, n + 1):
                pt = maps.apply(MapId.TWO_DIM_BC, pt, params)
                (hval,) = maps.invariants_of(MapId.TWO_DIM_BC, pt, params)
                max_drift = max(max_drift, abs(hval - omega))
                dist = abs(pt[0] - x) + abs(pt[1] - y)
                if step < n:
                    premature = min(premature, dist)
        except PoleError:
            resamples += 1
            continue
        resid = abs(pt[0] - x) + abs(pt[1] - y)
        max_resid = max(max_resid, resid)
        min_premature = min(min_premature, premature)
        if resid < RETURN_TOL and (n == 1 or premature > NEGATIVE_TOL):
            passes += 1
        done += 1
    neg_min = _negative_control_2d(rng, n, b, params)
    return VarietyReport(
        condition=f"y(1-bx) = exp(2*pi*i*{k}/{n}), c=0",
        period=n,
        samples=samples,
        passes=passes,
        resamples=resamples,
        max_return_residual=max_resid,
        negative_control_min_distance=neg_min,
        max_intermediate_invariant_drift=max_drift,
        min_premature_return_distance=min_premature,
    )


def _negative_control_2d(rng, n, b, params, trials: int = 20) -> float:
    neg_min = math.inf
    done = 0
    while done < trials:
        x = _disk_sample(rng)
        if abs(1 - b * x) < 1e-6:
            continue
        hval = _disk_sample(rng)
        # stay away from every n-th root of unity, where the variety lives
        if abs(abs(hval) - 1) < 0.1:
            continue
        y = hval / (1 - b * x)
        try:
            pt = StatePoint((x, y))
            for _ in range(n):
                pt = maps.apply(MapId.TWO_DIM_BC, pt, params)
        except PoleError:
            continue
        neg_min = min(neg_min, abs(pt[0] - x) + abs(pt[1] - y))
        done += 1
    return neg_min


_LV_GAMMA_CACHE: dict = {}


def lv_gamma_rs(period: int) -> MultiPoly:
    """The Lotka-Volterra periodicity factor in the invariants (r, s)."""
    if period not in _LV_GAMMA_CACHE:
        series = gamma_series(period)
        _LV_GAMMA_CACHE[period] = lv_gamma(series.gamma_for_period(period))
    return _LV_GAMMA_CACHE[period]


def _roots_in_r(gamma_rs: MultiPoly, s: complex) -> list:
    """Solve gamma(r, s) = 0 for r at fixed numeric s."""
    ir = gamma_rs.symbols.index("r")
    i_s = gamma_rs.symbols.index("s")
    coeffs: dict = {}
    for exp, c in gamma_rs.terms_list():
        coeffs[exp[ir]] = coeffs.get(exp[ir], 0j) + c * s ** exp[i_s]
    deg = max(coeffs)
    dense = [coeffs.get(i, 0j) for i in range(deg, -1, -1)]
    return [complex(z) for z in np.roots(dense)]


def lv_level_set_point(r: complex, s: complex, x: complex):
    """A point (x, y, z) with xyz = r and (1-x)(1-y)(1-z) = s."""
    if abs(x) < 1e-6 or abs(1 - x) < 1e-6:
        raise ValueError("x too close to a construction pole")
    yz = r / x
    sigma = 1 + yz - s / (1 - x)
    disc = cmath.sqrt(sigma * sigma - 4 * yz)
    y = (sigma + disc) / 2
    z = (sigma - disc) / 2
    if abs(y * z - yz) > CONSTRUCT_TOL * (1 + abs(yz)) or abs(
        (1 - x) * (1 - y) * (1 - z) - s
    ) > CONSTRUCT_TOL * (1 + abs(s)):
        raise ValueError("level-set construction lost accuracy")
    return StatePoint((x, y, z))


def verify_variety_lv(n: int, samples: int, seed: int = 0) -> VarietyReport:
    """Sample the locus gamma_n(r, s) = 0 of the three-component map and
    assert exact period-n return of the full state."""
    if n not in (3, 4, 5):
        raise ValueError("supported periods: 3, 4, 5")
    gamma = lv_gamma_rs(n)
    rng = random.Random(seed)
    passes = 0
    resamples = 0
    max_resid = 0.0
    max_drift = 0.0
    min_premature = math.inf
    done = 0
    root_cursor = 0
    while done < samples:
        s = _disk_sample(rng)
        try:
            roots = _roots_in_r(gamma, s)
        except Exception:
            resamples += 1
            continue
        r = roots[root_cursor % len(roots)]
        root_cursor += 1
        x = _disk_sample(rng)
        try:
            start = lv_level_set_point(r, s, x)
        except ValueError:
            resamples += 1
            continue
        try:
            pt = start
            premature = math.inf
            inv0 = maps.invariants_of(MapId.LV3, start, {})
            for step in range(1, n + 1):
                pt = maps.apply(MapId.LV3, pt, {})
                inv = maps.invariants_of(MapId.LV3, pt, {})
                max_drift = max(
                    max_drift, max(abs(a - b0) for a, b0 in zip(inv, inv0))
                )
                dist = sum(abs(pt[i] - start[i]) for i in range(3))
                if step < n:
                    premature = min(premature, dist)
        except PoleError:
            resamples += 1
            continue
        resid = sum(abs(pt[i] - start[i]) for i in range(3))
        max_resid = max(max_resid, resid)
        min_premature = min(min_premature, premature)
        if resid < RETURN_TOL and premature > NEGATIVE_TOL:
            passes += 1
        done += 1
    neg_min = _negative_control_lv(rng, n, gamma)
    return VarietyReport(
        condition=f"gamma_{n}(r, s) = 0 on the three-component map",
        period=n,
        samples=samples,
        passes=passes,
        resamples=resamples,
        max_return_residual=max_resid,
        negative_control_min_distance=neg_min,
        max_intermediate_invariant_drift=max_drift,
        min_premature_return_distance=min_premature,
    )


def _negative_control_lv(rng, n, gamma, trials: int = 20) -> float:
    neg_min = math.inf
    done = 0
    while done < trials:
        r = _disk_sample(rng)
        s = _disk_sample(rng)
        if abs(gamma.evaluate({"r": r, "s": s})) < 0.1:
            continue
        x = _disk_sample(rng)
        try:
            start = lv_level_set_point(r, s, x)
            pt = start
            for _ in range(n):
                pt = maps.apply(MapId.LV3, pt, {})
        except (ValueError, PoleError):
            continue
        neg_min = min(neg_min, sum(abs(pt[i] - start[i]) for i in range(3)))
        done += 1
    return neg_min
