"""Periodic points of the degree-2 normal-form map z -> z(h'+z)/(1+hz).

The n-fold composition is a rational function of degree 2^n; its periodic
points are the roots of numerator - z*denominator, found with an
Aberth-style simultaneous iteration and polished by Newton steps on the
iterated map.  Near the integrable parameter locus hh' = 1 the polynomial
nearly factors and its root clusters are violently ill-conditioned, so the
solver switches to mpmath arbitrary precision there automatically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np

from .maps import PoleError

EXTENDED_PRECISION_EPS = 1e-3  # |hh'-1| below this switches to mpmath


class RootFindingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RationalFunc1D:
    """Dense rational function; coefficient lists ascending in z."""

    numer: tuple
    denom: tuple
    degree_bound: int

    def __call__(self, z):
        return _polyval(self.numer, z) / _polyval(self.denom, z)

    @property
    def degree(self) -> int:
        return max(len(self.numer), len(self.denom)) - 1


def _polyval(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _polymul(u, v):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a != 0:
            for j, b in enumerate(v):
                out[i + j] += a * b
    return out


def _polyadd(u, v):
    n = max(len(u), len(v))
    return [(u[i] if i < len(u) else 0) + (v[i] if i < len(v) else 0) for i in range(n)]


def compose_n(h: complex, hp: complex, n: int, max_n: int = 10) -> RationalFunc1D:
    """Coefficients of the n-fold composition Z^(n) = P_n/Q_n.

    At hh' = 1 exactly, numerator and denominator share the full
    near-factorization; the reduced form h^(-n) z is returned instead of the
    raw product (which would be identically cancellable).
    """
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be within 1..{max_n}")
    if h * hp == 1:
        return RationalFunc1D((0, h ** (-n)), (1,), degree_bound=1)
    P = [0, hp, 1]
    Q = [1, h]
    for _ in range(n - 1):
        A = _polyadd([hp * c for c in Q], P)
        B = _polyadd(Q, [h * c for c in P])
        P = _polymul(P, A)
        Q = _polymul(Q, B)
    mx = max(max(abs(c) for c in P), max(abs(c) for c in Q))
    if not (mx < 1e280):
        raise RootFindingError("composition coefficients exceeded the precision budget")
    return RationalFunc1D(tuple(P), tuple(Q), degree_bound=2**n)


@dataclass(frozen=True)
class PeriodicPoint:
    z: complex  # cmath.inf marks the fixed point at infinity
    period: int
    multiplier: complex
    cls: str  # "attracting" | "repelling" | "neutral"
    residual: float

    @property
    def is_infinity(self) -> bool:
        return self.z == cmath.inf


def classify(multiplier: complex, tol: float = 1e-6) -> str:
    m = abs(multiplier)
    if m > 1 + tol:
        return "repelling"
    if m < 1 - tol:
        return "attracting"
    return "neutral"


def _step(z, h, hp):
    den = 1 + h * z
    if abs(den) == 0:
        raise PoleError("1 + h*z")
    return z * (hp + z) / den


def _step_deriv(z, h, hp):
    den = 1 + h * z
    return (hp + 2 * z + h * z * z) / (den * den)


def iterate_map(z, h, hp, n: int):
    for _ in range(n):
        z = _step(z, h, hp)
    return z


def cycle_multiplier(z, h, hp, n: int):
    lam = 1
    w = z
    for _ in range(n):
        lam = lam * _step_deriv(w, h, hp)
        w = _step(w, h, hp)
    return lam


# ----------------------------------------------------------------------
# all-roots solvers


def _periodicity_ratio(z, h, hp, n):
    """Newton ratio p/p' of p(z) = P_n(z) - z Q_n(z), evaluated through the
    composition recursion with joint rescaling.

    The monomial coefficients of P_n span so many orders of magnitude that
    rounding them to doubles destroys the roots from degree ~32 on; the
    recursion evaluates the same polynomial stably, and a common rescale of
    (P, Q, P', Q') at every level cancels out of the ratio.
    """
    P = z * (hp + z)
    Q = 1 + h * z
    dP = hp + 2 * z
    dQ = h * (z * 0 + 1) if hasattr(z, "shape") else h
    for _ in range(n - 1):
        A = hp * Q + P
        dA = hp * dQ + dP
        B = Q + h * P
        dB = dQ + h * dP
        P, dP = P * A, dP * A + P * dA
        Q, dQ = Q * B, dQ * B + Q * dB
        if hasattr(P, "shape"):
            scale = np.maximum(np.abs(P), np.abs(Q))
            scale = np.where(scale > 0, scale, 1.0)
        else:
            scale = max(abs(P), abs(Q)) or 1
        P, Q, dP, dQ = P / scale, Q / scale, dP / scale, dQ / scale
    p = P - z * Q
    dp = dP - Q - z * dQ
    return p, dp


def _aberth_dynamic(h: complex, hp: complex, n: int, tol: float = 5e-14, max_iter: int = 400):
    """All 2^n finite periodicity roots by Aberth simultaneous iteration with
    implicit (recursion-based) polynomial evaluation."""
    deg = 2**n
    # all periodic points live inside the radius where the modulus grows
    # strictly under the map and escapes
    r0 = abs(h) + abs(hp)
    r_max = (r0 + math.sqrt(r0 * r0 + 4)) / 2 * 1.25 + 0.5
    rings = max(1, int(round(math.sqrt(deg) / 2)))
    pts = []
    k = 0
    for ring in range(rings):
        cnt = deg // rings + (1 if ring < deg % rings else 0)
        rad = r_max * (0.25 + 0.75 * (ring + 1) / rings)
        for j in range(cnt):
            ang = 2 * math.pi * (j + 0.31) / cnt + 0.57 * ring + 0.123
            pts.append(rad * complex(math.cos(ang), math.sin(ang)))
            k += 1
    z = np.array(pts, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(max_iter):
            p, dp = _periodicity_ratio(z, h, hp, n)
            ratio = np.where(dp != 0, p / dp, 0.0)
            ratio = np.nan_to_num(ratio, nan=0.0, posinf=0.0, neginf=0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1 - ratio * s)
            w = np.nan_to_num(w, nan=0.0, posinf=0.0, neginf=0.0)
            z = z - w
            if np.max(np.abs(w)) < tol * (1 + np.max(np.abs(z))):
                break
    return z


def _aberth_mp(h, hp, n: int, dps: int, tol_exp: int, max_iter: int = 500):
    """Aberth iteration in mpmath precision, evaluating through the
    composition recursion (seeded from the double-precision root set, which
    is correct to cluster scale and merely unable to resolve the clusters)."""
    deg = 2**n
    with mp.workdps(dps):
        hq, hpq = mp.mpc(h), mp.mpc(hp)
        seeds = _aberth_dynamic(complex(h), complex(hp), n)
        rng_angle = 0.7390851332151607  # fixed irrational-ish jitter
        z = []
        for i, s in enumerate(seeds):
            jit = mp.mpf(10) ** (-10) * (1 + abs(mp.mpc(s)))
            z.append(mp.mpc(s) + jit * mp.expjpi(2 * mp.mpf((i * rng_angle) % 1)))
        tol = mp.mpf(10) ** (-tol_exp)
        for _ in range(max_iter):
            moved = mp.mpf(0)
            for i in range(deg):
                zi = z[i]
                pv, dv = _periodicity_ratio(zi, hq, hpq, n)
                if dv == 0:
                    continue
                ratio = pv / dv
                s = mp.mpc(0)
                for j in range(deg):
                    if j != i:
                        dz = zi - z[j]
                        if dz == 0:
                            dz = mp.mpf(10) ** (-mp.mp.dps)
                        s += 1 / dz
                denom = 1 - ratio * s
                if denom == 0:
                    continue
                w = ratio / denom
                z[i] = zi - w
                moved = max(moved, abs(w) / (1 + abs(z[i])))
            if moved < tol:
                break
        return z


def _auto_dps(h: complex, hp: complex, n: int) -> int:
    eps = abs(h * hp - 1)
    if eps == 0 or eps >= EXTENDED_PRECISION_EPS:
        return 0
    # largest root-cluster multiplicity is 2^(n-1); its conditioning costs
    # roughly (multiplicity - 1) * log10(1/eps) digits
    mult = 2 ** (n - 1)
    return min(400, 30 + int((mult - 1) * (-math.log10(eps)) * 1.1))


def periodic_points(
    h: complex,
    hp: complex,
    n: int,
    *,
    dedup_tol: float | None = None,
    divisor_tol: float | None = None,
    residual_tol: float = 1e-8,
    class_tol: float = 1e-6,
    dps: int | None = None,
    max_n: int = 10,
) -> list:
    """All points of exact period n, polished, classified, one entry per
    point (a period-n cycle contributes n entries).

    For n = 1 the three fixed points are returned, including infinity with
    multiplier h.  For n >= 2 only finite-plane points are reported; the
    divisor-period points are filtered by residual against the lower
    compositions, not by coordinate matching.

    Near the integrable locus the solver runs in mpmath precision sized to
    the cluster conditioning, and the duplicate-merging tolerance tightens
    with it: distinct periodic points approach each other like powers of
    hh'-1 there, far below the generic 1e-7 spacing.
    """
    h, hp = complex(h), complex(hp)
    if n == 1:
        pts = [PeriodicPoint(0j, 1, hp, classify(hp, class_tol), 0.0)]
        if h != 1:
            zp = (1 - hp) / (1 - h)
            lam = (2 - h - hp) / (1 - h * hp) if h * hp != 1 else complex("inf")
            pts.append(PeriodicPoint(zp, 1, lam, classify(lam, class_tol), 0.0))
        pts.append(PeriodicPoint(cmath.inf, 1, h, classify(h, class_tol), 0.0))
        return pts
    if h * hp == 1:
        # integrable locus: no isolated periodic points unless h^n = 1
        return []
    if not 1 <= n <= max_n:
        raise ValueError(f"n must be within 1..{max_n}")
    if dps is None:
        dps = _auto_dps(h, hp, n)
    if dps == 0:
        roots = [complex(z) for z in _aberth_dynamic(h, hp, n)]
        roots = [_newton_polish(z, h, hp, n) for z in roots]
        try:
            return _filter_and_classify(
                roots, h, hp, n, dedup_tol or 1e-7, divisor_tol or 1e-7, residual_tol, class_tol
            )
        except RootFindingError:
            dps = 40  # double precision stalled; retry in extended precision
    last_err = None
    for _ in range(3):
        try:
            with mp.workdps(dps):
                hq, hpq = mp.mpc(h), mp.mpc(hp)
                roots = _aberth_mp(h, hp, n, dps, tol_exp=dps - 8)
                roots = [_newton_polish_mp(z, hq, hpq, n) for z in roots]
                # polished points sit at ~10^-(dps-8); genuinely distinct
                # points (and genuine divisor-period residuals) sit at powers
                # of hh'-1, far above; anchor both cutoffs to the precision
                mp_dedup = dedup_tol if dedup_tol is not None else 10.0 ** (-(dps - 20))
                mp_divisor = divisor_tol if divisor_tol is not None else 10.0 ** (-(dps // 2))
                return _filter_and_classify_mp(
                    roots, hq, hpq, n, mp_dedup, mp_divisor, residual_tol, class_tol
                )
        except RootFindingError as exc:
            last_err = exc
            dps = int(dps * 1.6) + 10
    raise last_err


def _newton_polish(z: complex, h: complex, hp: complex, n: int, rounds: int = 6) -> complex:
    for _ in range(rounds):
        try:
            fz = iterate_map(z, h, hp, n) - z
            lam = cycle_multiplier(z, h, hp, n)
        except (PoleError, ZeroDivisionError, OverflowError):
            return z
        dg = lam - 1
        if dg == 0:
            return z
        step = fz / dg
        z = z - step
        if abs(step) < 1e-14 * (1 + abs(z)):
            break
    return z


def _newton_polish_mp(z, h, hp, n, rounds: int = 12):
    for _ in range(rounds):
        try:
            fz = iterate_map(z, h, hp, n) - z
            lam = cycle_multiplier(z, h, hp, n)
        except (PoleError, ZeroDivisionError):
            return z
        dg = lam - 1
        if dg == 0:
            return z
        step = fz / dg
        z = z - step
        if abs(step) < mp.mpf(10) ** (-mp.mp.dps + 6) * (1 + abs(z)):
            break
    return z


def _filter_and_classify(roots, h, hp, n, dedup_tol, divisor_tol, residual_tol, class_tol):
    kept = []
    for z in roots:
        if any(abs(z - w.z) < dedup_tol * (1 + abs(z)) for w in kept):
            continue
        try:
            resid = abs(iterate_map(z, h, hp, n) - z)
        except (PoleError, ZeroDivisionError, OverflowError):
            continue
        if not resid <= residual_tol * (1 + abs(z)):  # NaN counts as failure
            raise RootFindingError(
                f"root finder did not converge: residual {resid:.3g} at degree 2^{n}"
            )
        minimal = True
        for m in range(1, n):
            if n % m == 0:
                try:
                    if abs(iterate_map(z, h, hp, m) - z) < divisor_tol * (1 + abs(z)):
                        minimal = False
                        break
                except (PoleError, ZeroDivisionError, OverflowError):
                    continue
        if not minimal:
            continue
        lam = cycle_multiplier(z, h, hp, n)
        kept.append(PeriodicPoint(z, n, lam, classify(lam, class_tol), resid))
    return kept


def _filter_and_classify_mp(roots, h, hp, n, dedup_tol, divisor_tol, residual_tol, class_tol):
    kept = []
    out = []
    for z in roots:
        if any(abs(z - w) < dedup_tol * (1 + abs(z)) for w in kept):
            continue
        try:
            resid = abs(iterate_map(z, h, hp, n) - z)
        except (PoleError, ZeroDivisionError):
            continue
        if not resid <= residual_tol * (1 + abs(z)):
            raise RootFindingError(f"mp root finder did not converge: residual {mp.nstr(resid, 5)}")
        minimal = True
        for m in range(1, n):
            if n % m == 0:
                try:
                    if abs(iterate_map(z, h, hp, m) - z) < divisor_tol * (1 + abs(z)):
                        minimal = False
                        break
                except (PoleError, ZeroDivisionError):
                    continue
        if not minimal:
            continue
        lam = cycle_multiplier(z, h, hp, n)
        kept.append(z)
        out.append(
            PeriodicPoint(
                complex(z), n, complex(lam), classify(complex(lam), class_tol), float(resid)
            )
        )
    return out


def expected_count(n: int) -> int:
    """Exact-period-n count of finite-plane solutions of Z^(n) = z for the
    generic degree-2 map: 2^n minus the two finite fixed points minus the
    counts of all intermediate divisor periods."""
    if n == 1:
        return 2
    total = 2**n - 2
    for m in range(2, n):
        if n % m == 0:
            total -= expected_count(m)
    return total


def fossil_points(h: complex, n: int) -> list:
    """The n limit locations -1/h, -1, -h, ..., -h^(n-2) that period-n
    points crowd around as hh' -> 1 (they are not periodic in the limit)."""
    if n < 1:
        raise ValueError("n must be positive")
    return [-(h ** k) for k in range(-1, n - 1)]


def dist_to_fossils(z: complex, h: complex, n: int) -> float:
    return min(abs(z - w) for w in fossil_points(h, n))


def transition_scan(
    h: complex,
    n: int,
    delta_grid: Sequence[float],
    *,
    class_tol: float = 1e-6,
    include_divisors: bool = False,
) -> list:
    """Rows (delta, period, z, multiplier, class, dist_to_fossil) for each
    periodic point at h' = (1 + delta)/h, walking the grid toward the
    integrable locus."""
    if any(d == 0 for d in delta_grid):
        raise ValueError("delta grid must be nonzero (delta = 0 has no periodic points)")
    rows = []
    for delta in delta_grid:
        hp = (1 + delta) / h
        periods = [n] if not include_divisors else [m for m in range(1, n + 1) if n % m == 0]
        for period in periods:
            if period == 1:
                pts = [p for p in periodic_points(h, hp, 1, class_tol=class_tol) if not p.is_infinity]
            else:
                pts = periodic_points(h, hp, period, class_tol=class_tol)
            for p in pts:
                rows.append(
                    {
                        "delta": float(delta),
                        "period": period,
                        "z": p.z,
                        "multiplier": p.multiplier,
                        "class": p.cls,
                        "dist_to_fossil": dist_to_fossils(p.z, h, n),
                    }
                )
    return rows


def max_fossil_distance(rows: Sequence[dict], delta: float, period: int) -> float:
    sel = [r["dist_to_fossil"] for r in rows if r["delta"] == delta and r["period"] == period]
    if not sel:
        raise ValueError(f"no rows for delta={delta}, period={period}")
    return max(sel)
